#include "plsm/graph/store.hpp"

#include <algorithm>

#include "json.hpp"
#include "plsm/error.hpp"
#include "plsm/graph/merge_operator.hpp"

namespace plsm::graph {

using json = nlohmann::json;

namespace {

constexpr char kVertexPrefix = 'V';
constexpr char kPropertyPrefix = 'P';
constexpr const char* kSketchFile = "degrees.sketch";

void put_be64(std::string& out, uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint64_t get_be64(std::string_view s) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | static_cast<unsigned char>(s[static_cast<size_t>(i)]);
  return v;
}

std::string property_prefix(const Element& e) {
  std::string key;
  key.push_back(kPropertyPrefix);
  key.push_back(e.is_edge ? 'E' : 'V');
  put_be64(key, e.a);
  if (e.is_edge) put_be64(key, e.b);
  return key;
}

// Smallest key greater than every key starting with `prefix`.
std::string prefix_end(std::string prefix) {
  while (!prefix.empty() && static_cast<unsigned char>(prefix.back()) == 0xff) prefix.pop_back();
  if (!prefix.empty()) prefix.back() = static_cast<char>(static_cast<unsigned char>(prefix.back()) + 1);
  return prefix;
}

bool contains(const std::vector<VertexId>& ids, VertexId id) {
  return std::binary_search(ids.begin(), ids.end(), id);
}

}  // namespace

const char* to_string(UpdatePolicy p) {
  switch (p) {
    case UpdatePolicy::kAdaptive: return "adaptive";
    case UpdatePolicy::kAlwaysDelta: return "delta";
    case UpdatePolicy::kAlwaysPivot: return "pivot";
  }
  return "?";
}

std::optional<UpdatePolicy> parse_policy(std::string_view s) {
  if (s == "adaptive") return UpdatePolicy::kAdaptive;
  if (s == "delta") return UpdatePolicy::kAlwaysDelta;
  if (s == "pivot") return UpdatePolicy::kAlwaysPivot;
  return std::nullopt;
}

std::string vertex_key(VertexId u) {
  std::string key;
  key.reserve(9);
  key.push_back(kVertexPrefix);
  put_be64(key, u);
  return key;
}

VertexId vertex_from_key(std::string_view key) {
  if (key.size() != 9 || key[0] != kVertexPrefix) throw_corruption("not a vertex key");
  return get_be64(key.substr(1));
}

GraphStore::GraphStore(GraphConfig config, std::unique_ptr<lsm::Engine> engine)
    : config_(std::move(config)),
      engine_(std::move(engine)),
      sketch_(config_.sketch_seed),
      tracker_(config_.theta_window) {}

std::unique_ptr<GraphStore> GraphStore::open(const std::string& dir, GraphConfig config,
                                             lsm::Env* env) {
  if (config.ef_segment_length < 2) throw_invalid("EF segment length must be >= 2");
  auto op = std::make_shared<AdjacencyMergeOperator>(config.codec, config.ef_segment_length);
  lsm::EngineOptions options;
  options.tree = config.tree;
  options.env = env;
  options.merge_operator = op;
  auto engine = lsm::Engine::open(dir, std::move(options));

  const std::string app = engine->app_metadata();
  json state;
  if (!app.empty()) {
    try {
      state = json::parse(app);
      const auto& g = state.at("graph");
      config.direction = g.at("directed").get<bool>() ? DirectionMode::kDirected
                                                      : DirectionMode::kUndirected;
      config.codec = g.at("codec").get<std::string>() == "ef" ? CodecMode::kEliasFano
                                                              : CodecMode::kRaw;
      config.ef_segment_length = g.at("ef_segment_length").get<uint32_t>();
      config.sketch_seed = g.at("sketch_seed").get<uint64_t>();
    } catch (const json::exception& e) {
      throw_corruption(std::string("graph metadata: ") + e.what());
    }
  }
  op->set_codec(config.codec, config.ef_segment_length);
  config.tree = engine->config();

  std::unique_ptr<GraphStore> store(new GraphStore(std::move(config), std::move(engine)));
  store->restore_state();
  store->engine_->set_app_metadata(store->state_json());
  return store;
}

GraphStore::~GraphStore() {
  try {
    close();
  } catch (const std::exception&) {
    // close() reports failures to callers that ask.
  }
}

void GraphStore::restore_state() {
  const std::string app = engine_->app_metadata();
  auto& env = engine_->env();
  const std::string sketch_path = lsm::join_path(engine_->dir(), kSketchFile);
  bool counters = false;
  if (!app.empty()) {
    const auto c = json::parse(app).value("counters", json::object());
    if (!c.empty()) {
      vertices_ = c.at("vertices").get<uint64_t>();
      edges_ = c.at("edges").get<uint64_t>();
      half_edges_ = c.at("half_edges").get<uint64_t>();
      counters = true;
    }
  }
  const bool have_sketch = env.exists(sketch_path);
  if (have_sketch) sketch_ = sketch::DegreeSketch::deserialize(env.read_file(sketch_path));
  if (counters && have_sketch) return;

  // Rebuild from the adjacency lists themselves.
  Census c;
  uint64_t loops = 0;
  engine_->scan(std::string(1, kVertexPrefix), std::string(1, kVertexPrefix + 1),
                [&](std::string_view key, const lsm::Value& value) {
                  auto adj = resolve(decode_payload(value.bytes));
                  if (!adj) return true;
                  const VertexId u = vertex_from_key(key);
                  ++c.vertices;
                  c.half_edges += adj->out.size() + adj->in.size();
                  c.edges += adj->out.size();
                  loops += contains(adj->out, u) ? 1 : 0;
                  if (!have_sketch && u <= sketch::DegreeSketch::kMaxVertex) {
                    for (size_t i = 0; i < adj->out.size() + adj->in.size(); ++i) sketch_.increment(u);
                  }
                  return true;
                });
  if (config_.direction == DirectionMode::kUndirected) c.edges = (c.edges - loops) / 2 + loops;
  if (!counters) {
    vertices_ = c.vertices;
    edges_ = c.edges;
    half_edges_ = c.half_edges;
  }
}

std::string GraphStore::state_json() const {
  json j = {{"graph",
             {{"directed", config_.direction == DirectionMode::kDirected},
              {"codec", config_.codec == CodecMode::kEliasFano ? "ef" : "raw"},
              {"ef_segment_length", config_.ef_segment_length},
              {"policy", to_string(config_.policy)},
              {"sketch_seed", config_.sketch_seed}}},
            {"counters",
             {{"vertices", vertices_.load()},
              {"edges", edges_.load()},
              {"half_edges", half_edges_.load()}}}};
  return j.dump();
}

void GraphStore::close() {
  std::lock_guard lock(write_mu_);
  if (closed_) return;
  closed_ = true;
  if (!engine_->read_only()) {
    engine_->env().write_file_atomic(lsm::join_path(engine_->dir(), kSketchFile), sketch_.serialize());
    engine_->set_app_metadata(state_json());
  }
  engine_->close();
}

policy::CostParams GraphStore::current_params() const {
  policy::CostParams p;
  const auto& tree = engine_->config();
  p.id_bytes = 8;
  p.block_bytes = tree.block_bytes;
  p.size_ratio = tree.size_ratio;
  p.levels = engine_->level_count();
  const uint64_t n = vertices_.load();
  p.avg_degree = n == 0 ? 0.0 : static_cast<double>(edges_.load()) / static_cast<double>(n);
  p.theta_lookup = tracker_.theta_lookup();
  p.theta_update = 1.0 - p.theta_lookup;
  p.mode = tree.leveling;
  return p;
}

UpdateKind GraphStore::route(VertexId u) {
  switch (config_.policy) {
    case UpdatePolicy::kAlwaysDelta: return UpdateKind::kDelta;
    case UpdatePolicy::kAlwaysPivot: return UpdateKind::kPivot;
    case UpdatePolicy::kAdaptive: break;
  }
  // IDs outside the sketch are treated as saturated.
  if (u > sketch::DegreeSketch::kMaxVertex) return UpdateKind::kDelta;
  return policy::choose_update(static_cast<double>(sketch_.estimate(u)), current_params(),
                               sketch_.is_saturated(u));
}

std::optional<AdjacencyPayload> GraphStore::read_payload(VertexId u) {
  auto value = engine_->get(vertex_key(u));
  if (!value) return std::nullopt;
  if (value->kind == EntryKind::kVertexTombstone) return AdjacencyPayload::tombstone(config_.direction);
  return decode_payload(value->bytes);
}

void GraphStore::half_update(VertexId u, bool out_list, VertexId id, bool add, UpdateKind kind) {
  tracker_.observe(policy::OpKind::kUpdate);
  const double estimate =
      u <= sketch::DegreeSketch::kMaxVertex ? static_cast<double>(sketch_.estimate(u)) : 0.0;
  if (kind == UpdateKind::kDelta) {
    ++delta_updates_;
    delta_estimate_sum_ += estimate;
    auto payload = add ? AdjacencyPayload::delta_add(config_.direction, out_list, id)
                       : AdjacencyPayload::delta_remove(config_.direction, out_list, id);
    engine_->merge(vertex_key(u), encode_payload(payload, config_.codec, config_.ef_segment_length));
  } else {
    ++pivot_updates_;
    pivot_estimate_sum_ += estimate;
    auto adj = resolve(read_payload(u));
    if (!adj) {
      if (!add) return;
      adj = Adjacency{};
    }
    auto& list = out_list ? adj->out : adj->in;
    auto pos = std::lower_bound(list.begin(), list.end(), id);
    const bool present = pos != list.end() && *pos == id;
    if (add == present) return;  // already in the requested state
    if (add) list.insert(pos, id);
    else list.erase(pos);
    auto pivot = AdjacencyPayload::pivot(config_.direction, std::move(adj->out), std::move(adj->in));
    engine_->put(vertex_key(u), EntryKind::kPivot,
                 encode_payload(pivot, config_.codec, config_.ef_segment_length));
  }
  if (add && u <= sketch::DegreeSketch::kMaxVertex) sketch_.increment(u);
}

EdgeRoute GraphStore::edge_update(VertexId u, VertexId v, bool add) {
  if (u == v && !config_.allow_self_loops) throw_invalid("self-loops are disabled");
  std::lock_guard lock(write_mu_);
  if (add) {
    for (VertexId x : {u, v}) {
      if (x <= sketch::DegreeSketch::kMaxVertex && sketch_.cell(x) == 0) ++vertices_;
      if (u == v) break;
    }
  }
  EdgeRoute route_taken;
  const bool directed = config_.direction == DirectionMode::kDirected;
  route_taken.first = route(u);
  half_update(u, true, v, add, route_taken.first);
  if (directed || u != v) {
    const UpdateKind second = route(v);
    half_update(v, !directed, u, add, second);
    route_taken.second = second;
  }
  if (add) {
    ++edges_;
    half_edges_ += route_taken.second ? 2 : 1;
  }
  return route_taken;
}

EdgeRoute GraphStore::add_edge(VertexId u, VertexId v) { return edge_update(u, v, true); }

EdgeRoute GraphStore::delete_edge(VertexId u, VertexId v) { return edge_update(u, v, false); }

bool GraphStore::exists_locked(VertexId u) { return resolve(read_payload(u)).has_value(); }

bool GraphStore::exists(VertexId u) { return exists_locked(u); }

void GraphStore::add_vertex(VertexId u) {
  std::lock_guard lock(write_mu_);
  if (exists_locked(u)) return;
  engine_->put(vertex_key(u), EntryKind::kPivot,
               encode_payload(AdjacencyPayload::pivot(config_.direction, {}, {}), config_.codec,
                              config_.ef_segment_length));
  ++vertices_;
}

void GraphStore::delete_vertex(VertexId u) {
  std::lock_guard lock(write_mu_);
  engine_->put(vertex_key(u), EntryKind::kVertexTombstone, {});
}

void GraphStore::filter_dangling(std::vector<VertexId>& ids) {
  std::erase_if(ids, [&](VertexId v) { return !exists_locked(v); });
}

std::optional<Adjacency> GraphStore::get_neighbors(VertexId u) {
  tracker_.observe(policy::OpKind::kLookup);
  auto adj = resolve(read_payload(u));
  if (adj && config_.strict) {
    filter_dangling(adj->out);
    filter_dangling(adj->in);
  }
  return adj;
}

std::optional<std::vector<VertexId>> GraphStore::get_out_neighbors(VertexId u) {
  auto adj = get_neighbors(u);
  if (!adj) return std::nullopt;
  return std::move(adj->out);
}

std::optional<std::vector<VertexId>> GraphStore::get_in_neighbors(VertexId u) {
  auto adj = get_neighbors(u);
  if (!adj) return std::nullopt;
  if (config_.direction == DirectionMode::kUndirected) return std::move(adj->out);
  return std::move(adj->in);
}

bool GraphStore::has_edge(VertexId u, VertexId v) {
  tracker_.observe(policy::OpKind::kLookup);
  bool found = false;
  engine_->walk(vertex_key(u), [&](const lsm::Record& r) {
    if (r.kind == EntryKind::kVertexTombstone) return false;
    const auto p = decode_payload(r.value);
    if (r.kind == EntryKind::kPivot) {
      found = contains(p.out.adds, v);
      return false;
    }
    if (contains(p.out.adds, v)) {
      found = true;
      return false;
    }
    return !contains(p.out.removes, v);
  });
  if (found && config_.strict) found = exists_locked(v);
  return found;
}

void GraphStore::set_property(const Element& e, std::string_view name, std::string_view value) {
  std::lock_guard lock(write_mu_);
  engine_->put(property_prefix(e) + std::string(name), EntryKind::kPivot, value);
}

std::optional<std::string> GraphStore::get_property(const Element& e, std::string_view name) {
  auto value = engine_->get(property_prefix(e) + std::string(name));
  if (!value || value->kind != EntryKind::kPivot) return std::nullopt;
  return std::move(value->bytes);
}

void GraphStore::delete_property(const Element& e, std::string_view name) {
  std::lock_guard lock(write_mu_);
  engine_->put(property_prefix(e) + std::string(name), EntryKind::kVertexTombstone, {});
}

std::map<std::string, std::string> GraphStore::properties(const Element& e) {
  const std::string prefix = property_prefix(e);
  std::map<std::string, std::string> out;
  engine_->scan(prefix, prefix_end(prefix), [&](std::string_view key, const lsm::Value& value) {
    out.emplace(std::string(key.substr(prefix.size())), value.bytes);
    return true;
  });
  return out;
}

std::vector<Element> GraphStore::find_by_property(bool is_edge, std::string_view name,
                                                  std::string_view value) {
  std::string lo{kPropertyPrefix, is_edge ? 'E' : 'V'};
  const size_t id_bytes = is_edge ? 16 : 8;
  std::vector<Element> out;
  engine_->scan(lo, prefix_end(lo), [&](std::string_view key, const lsm::Value& v) {
    if (key.size() < 2 + id_bytes) return true;
    if (key.substr(2 + id_bytes) != name || v.bytes != value) return true;
    Element e;
    e.is_edge = is_edge;
    e.a = get_be64(key.substr(2));
    if (is_edge) e.b = get_be64(key.substr(10));
    out.push_back(e);
    return true;
  });
  return out;
}

Census GraphStore::census() {
  Census c;
  uint64_t loops = 0;
  engine_->scan(std::string(1, kVertexPrefix), std::string(1, kVertexPrefix + 1),
                [&](std::string_view key, const lsm::Value& value) {
                  auto adj = resolve(decode_payload(value.bytes));
                  if (!adj) return true;
                  ++c.vertices;
                  c.half_edges += adj->out.size() + adj->in.size();
                  c.edges += adj->out.size();
                  loops += contains(adj->out, vertex_from_key(key)) ? 1 : 0;
                  return true;
                });
  if (config_.direction == DirectionMode::kUndirected) c.edges = (c.edges - loops) / 2 + loops;
  vertices_ = c.vertices;
  edges_ = c.edges;
  half_edges_ = c.half_edges;
  return c;
}

StoreStats GraphStore::stats() const {
  StoreStats s;
  s.vertices = vertices_;
  s.edges = edges_;
  s.avg_degree = s.vertices == 0 ? 0.0
                                 : static_cast<double>(s.edges) / static_cast<double>(s.vertices);
  s.delta_updates = delta_updates_;
  s.pivot_updates = pivot_updates_;
  s.delta_estimate_sum = delta_estimate_sum_;
  s.pivot_estimate_sum = pivot_estimate_sum_;
  s.theta_lookup = tracker_.theta_lookup();
  s.levels = engine_->level_count();
  s.io = engine_->io_stats();
  return s;
}

void GraphStore::reset_stats() {
  std::lock_guard lock(write_mu_);
  engine_->reset_stats();
  tracker_.reset();
  delta_updates_ = 0;
  pivot_updates_ = 0;
  delta_estimate_sum_ = 0;
  pivot_estimate_sum_ = 0;
}

}  // namespace plsm::graph
