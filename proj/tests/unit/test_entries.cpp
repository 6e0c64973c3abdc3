#include <gtest/gtest.h>

#include <random>
#include <set>

#include "plsm/error.hpp"
#include "plsm/graph/entries.hpp"

using namespace plsm;
using namespace plsm::graph;

namespace {

constexpr auto U = DirectionMode::kUndirected;
constexpr auto D = DirectionMode::kDirected;

AdjacencyPayload add(VertexId v) { return AdjacencyPayload::delta_add(U, true, v); }
AdjacencyPayload del(VertexId v) { return AdjacencyPayload::delta_remove(U, true, v); }
AdjacencyPayload piv(std::vector<VertexId> ids) { return AdjacencyPayload::pivot(U, std::move(ids)); }

// Oracle for one key: existence plus a plain set, updated op by op.
struct KeyOracle {
  bool exists = false;
  std::set<VertexId> ids;
};

struct Generated {
  std::vector<AdjacencyPayload> chain;
  KeyOracle oracle;
};

Generated random_chain(std::mt19937_64& rng, size_t len, VertexId universe) {
  Generated g;
  for (size_t i = 0; i < len; ++i) {
    const VertexId x = rng() % universe;
    switch (rng() % 10) {
      case 0: {
        g.chain.push_back(AdjacencyPayload::tombstone(U));
        g.oracle = {};
        break;
      }
      case 1: {
        std::set<VertexId> s;
        for (int k = 0; k < 4; ++k) s.insert(rng() % universe);
        g.chain.push_back(piv({s.begin(), s.end()}));
        g.oracle.exists = true;
        g.oracle.ids = s;
        break;
      }
      case 2:
      case 3:
      case 4:
        g.chain.push_back(del(x));
        g.oracle.ids.erase(x);
        break;
      default:
        g.chain.push_back(add(x));
        g.oracle.exists = true;
        g.oracle.ids.insert(x);
        break;
    }
  }
  return g;
}

void expect_matches(const std::optional<Adjacency>& got, const KeyOracle& want) {
  ASSERT_EQ(got.has_value(), want.exists);
  if (got) {
    ASSERT_EQ(got->out, std::vector<VertexId>(want.ids.begin(), want.ids.end()));
    ASSERT_TRUE(got->in.empty());
  }
}

}  // namespace

TEST(Entries, MergeExamples) {
  EXPECT_EQ(merge_values(piv({1, 2}), add(1)), piv({1, 2}));
  EXPECT_EQ(merge_values(piv({1, 2}), del(1)), piv({2}));

  const auto dd = merge_values(add(7), add(8));
  EXPECT_EQ(dd.kind, EntryKind::kDelta);
  EXPECT_EQ(dd.out.adds, (std::vector<VertexId>{7, 8}));

  const std::vector<AdjacencyPayload> fig4{piv({5, 6}), add(7), add(8)};
  EXPECT_EQ(*fold_chain(fig4), piv({5, 6, 7, 8}));
  EXPECT_FALSE(fold_chain({}).has_value());

  const std::vector<AdjacencyPayload> flip{add(1), del(1), add(1)};
  const auto folded = *fold_chain(flip);
  EXPECT_EQ(folded.kind, EntryKind::kDelta);
  EXPECT_EQ(folded.out.adds, std::vector<VertexId>{1});
  EXPECT_TRUE(folded.out.removes.empty());
}

TEST(Entries, RemoveOfMissingEdgeIsNoop) {
  EXPECT_EQ(merge_values(piv({2}), del(9)), piv({2}));
}

TEST(Entries, TombstoneInteractions) {
  const auto t = AdjacencyPayload::tombstone(U);
  EXPECT_EQ(merge_values(piv({1}), t), t);
  EXPECT_EQ(merge_values(t, del(3)), t);
  EXPECT_EQ(merge_values(t, add(3)), piv({3}));
  EXPECT_FALSE(resolve(t).has_value());
  EXPECT_FALSE(resolve_at_bottom(t).has_value());
  EXPECT_FALSE(resolve_at_bottom(del(4)).has_value());
  EXPECT_EQ(*resolve_at_bottom(add(4)), piv({4}));
}

TEST(Entries, FoldMatchesOracle) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 5000; ++i) {
    const auto g = random_chain(rng, 1 + rng() % 30, 12);
    const auto folded = fold_chain(g.chain);
    ASSERT_NO_THROW(folded->validate());
    expect_matches(resolve(folded), g.oracle);
    const auto bottom = resolve_at_bottom(*folded);
    expect_matches(resolve(bottom), g.oracle);
    if (bottom) ASSERT_NE(bottom->kind, EntryKind::kDelta);
  }
}

TEST(Entries, SplitFoldIsAssociative) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 5000; ++i) {
    const auto g = random_chain(rng, 2 + rng() % 20, 10);
    const std::span<const AdjacencyPayload> all(g.chain);
    const size_t cut = 1 + rng() % (all.size() - 1);
    const auto left = *fold_chain(all.subspan(0, cut));
    const auto right = *fold_chain(all.subspan(cut));
    ASSERT_EQ(merge_values(left, right), *fold_chain(all));
  }
}

TEST(Entries, DeltaTripleAssociativity) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 3000; ++i) {
    AdjacencyPayload p[3];
    for (auto& x : p) x = rng() % 2 ? add(rng() % 6) : del(rng() % 6);
    const auto lhs = merge_values(merge_values(p[0], p[1]), p[2]);
    const auto rhs = merge_values(p[0], merge_values(p[1], p[2]));
    ASSERT_EQ(lhs, rhs);
    ASSERT_NO_THROW(lhs.validate());
  }
}

TEST(Entries, DirectedListsAreIndependent) {
  const auto base = AdjacencyPayload::pivot(D, {2, 3}, {7});
  auto r = merge_values(base, AdjacencyPayload::delta_add(D, false, 5));
  r = merge_values(r, AdjacencyPayload::delta_remove(D, true, 2));
  EXPECT_EQ(r, AdjacencyPayload::pivot(D, {3}, {5, 7}));
  EXPECT_THROW(merge_values(base, add(1)), Error);
}

TEST(Entries, ValidateRejectsMalformed) {
  auto p = piv({3, 2});
  EXPECT_THROW(p.validate(), Error);
  p = piv({2, 3});
  p.out.removes = {5};
  EXPECT_THROW(p.validate(), Error);
  auto d = add(1);
  d.out.removes = {1};
  EXPECT_THROW(d.validate(), Error);
  auto u = piv({1});
  u.in.adds = {4};
  EXPECT_THROW(u.validate(), Error);
}

TEST(Entries, EncodeRoundtrip) {
  std::mt19937_64 rng(3);
  for (auto codec : {CodecMode::kRaw, CodecMode::kEliasFano}) {
    EXPECT_EQ(encode_payload(piv({}), codec).size(), 1u);
    for (int i = 0; i < 2000; ++i) {
      const auto g = random_chain(rng, 1 + rng() % 40, i % 2 ? 40 : 1u << 30);
      const auto p = *fold_chain(g.chain);
      ASSERT_EQ(decode_payload(encode_payload(p, codec, 16)), p);
    }
    const auto dir = AdjacencyPayload::pivot(D, {1, 2, 3, 4, 5, 6, 7, 8, 9}, {100, 200});
    ASSERT_EQ(decode_payload(encode_payload(dir, codec)), dir);
  }
}

TEST(Entries, EliasFanoBeatsRawForLongLists) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    std::set<VertexId> s;
    const size_t len = 8 + rng() % 200;
    while (s.size() < len) s.insert(rng() % (1u << 20));
    const auto p = piv({s.begin(), s.end()});
    ASSERT_LT(encode_payload(p, CodecMode::kEliasFano).size(), encode_payload(p, CodecMode::kRaw).size());
  }
}

TEST(Entries, DecodeRejectsGarbage) {
  const auto good = encode_payload(piv({1, 2, 3}), CodecMode::kRaw);
  EXPECT_THROW(decode_payload(good.substr(0, good.size() - 1)), Error);
  EXPECT_THROW(decode_payload(good + "x"), Error);
  std::string bad = good;
  bad[0] = static_cast<char>(0xc0);
  EXPECT_THROW(decode_payload(bad), Error);
  EXPECT_THROW(decode_payload(""), Error);

  std::mt19937_64 rng(5);
  const auto ef = encode_payload(piv({1, 5, 9, 13, 17, 21, 25, 29, 33, 40}), CodecMode::kEliasFano);
  for (int i = 0; i < 20000; ++i) {
    std::string c = ef;
    const size_t bit = rng() % (c.size() * 8);
    c[bit / 8] = static_cast<char>(c[bit / 8] ^ (1 << (bit % 8)));
    try {
      decode_payload(c).validate();
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::kCorruption);
    }
  }
}
