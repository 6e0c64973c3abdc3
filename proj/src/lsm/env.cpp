#include "plsm/lsm/env.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>

#include "plsm/error.hpp"

namespace plsm::lsm {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void throw_io(const std::string& what, const std::string& path, int err = errno) {
  throw Error(ErrorCode::kIoError, what + " " + path + ": " + std::strerror(err));
}

class PosixWritableFile final : public WritableFile {
 public:
  explicit PosixWritableFile(std::string path) : path_(std::move(path)) {
    fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd_ < 0) throw_io("open", path_);
  }
  ~PosixWritableFile() override {
    if (fd_ >= 0) ::close(fd_);
  }

  void append(std::string_view data) override {
    while (!data.empty()) {
      const ssize_t n = ::write(fd_, data.data(), data.size());
      if (n < 0) {
        if (errno == EINTR) continue;
        throw_io("write", path_);
      }
      data.remove_prefix(static_cast<size_t>(n));
    }
  }
  void sync() override {
    if (::fdatasync(fd_) != 0) throw_io("sync", path_);
  }
  void close() override {
    if (fd_ >= 0 && ::close(fd_) != 0) {
      fd_ = -1;
      throw_io("close", path_);
    }
    fd_ = -1;
  }

 private:
  std::string path_;
  int fd_ = -1;
};

class PosixRandomAccessFile final : public RandomAccessFile {
 public:
  explicit PosixRandomAccessFile(std::string path) : path_(std::move(path)) {
    fd_ = ::open(path_.c_str(), O_RDONLY | O_CLOEXEC);
    if (fd_ < 0) throw_io("open", path_);
    const off_t end = ::lseek(fd_, 0, SEEK_END);
    if (end < 0) throw_io("seek", path_);
    size_ = static_cast<uint64_t>(end);
  }
  ~PosixRandomAccessFile() override { ::close(fd_); }

  std::string read(uint64_t offset, size_t n) const override {
    if (offset > size_ || n > size_ - offset) {
      throw Error(ErrorCode::kCorruption, "read beyond end of " + path_);
    }
    std::string out(n, '\0');
    size_t done = 0;
    while (done < n) {
      const ssize_t r = ::pread(fd_, out.data() + done, n - done, static_cast<off_t>(offset + done));
      if (r < 0) {
        if (errno == EINTR) continue;
        throw_io("pread", path_);
      }
      if (r == 0) throw Error(ErrorCode::kCorruption, "short read in " + path_);
      done += static_cast<size_t>(r);
    }
    return out;
  }
  uint64_t size() const override { return size_; }

 private:
  std::string path_;
  int fd_ = -1;
  uint64_t size_ = 0;
};

class PosixEnv final : public Env {
 public:
  std::unique_ptr<WritableFile> new_writable(const std::string& path) override {
    return std::make_unique<PosixWritableFile>(path);
  }
  std::shared_ptr<RandomAccessFile> open_random(const std::string& path) override {
    return std::make_shared<PosixRandomAccessFile>(path);
  }
  bool exists(const std::string& path) override { return fs::exists(path); }
  void remove(const std::string& path) override {
    std::error_code ec;
    fs::remove(path, ec);
    if (ec) throw_io("remove", path, ec.value());
  }
  void rename(const std::string& from, const std::string& to) override {
    std::error_code ec;
    fs::rename(from, to, ec);
    if (ec) throw_io("rename", from, ec.value());
  }
  void create_dir(const std::string& path) override {
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) throw_io("mkdir", path, ec.value());
  }
  std::vector<std::string> list_dir(const std::string& path) override {
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(path, ec)) {
      names.push_back(entry.path().filename().string());
    }
    if (ec) throw_io("list", path, ec.value());
    return names;
  }
};

}  // namespace

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  if (dir.back() == '/') return dir + name;
  return dir + "/" + name;
}

std::string Env::read_file(const std::string& path) {
  auto file = open_random(path);
  return file->read(0, file->size());
}

void Env::write_file_atomic(const std::string& path, std::string_view data) {
  const std::string tmp = path + ".tmp";
  {
    auto file = new_writable(tmp);
    file->append(data);
    file->sync();
    file->close();
  }
  rename(tmp, path);
}

Env& Env::posix() {
  static PosixEnv env;
  return env;
}

class MemWritableFile final : public WritableFile {
 public:
  MemWritableFile(MemEnv& env, std::shared_ptr<std::string> data)
      : env_(env), data_(std::move(data)) {}

  void append(std::string_view data) override {
    env_.consume_budget(data.size());
    std::lock_guard lock(env_.mu_);
    data_->append(data);
  }
  void sync() override {}
  void close() override {}

 private:
  MemEnv& env_;
  std::shared_ptr<std::string> data_;
};

namespace {

class MemRandomAccessFile final : public RandomAccessFile {
 public:
  explicit MemRandomAccessFile(std::shared_ptr<const std::string> data) : data_(std::move(data)) {}

  std::string read(uint64_t offset, size_t n) const override {
    if (offset > data_->size() || n > data_->size() - offset) {
      throw Error(ErrorCode::kCorruption, "read beyond end of in-memory file");
    }
    return data_->substr(offset, n);
  }
  uint64_t size() const override { return data_->size(); }

 private:
  std::shared_ptr<const std::string> data_;
};

}  // namespace

void MemEnv::consume_budget(size_t n) {
  std::lock_guard lock(mu_);
  if (!budget_) return;
  if (*budget_ < n) {
    budget_ = 0;
    throw Error(ErrorCode::kIoError, "in-memory disk full");
  }
  *budget_ -= n;
}

std::unique_ptr<WritableFile> MemEnv::new_writable(const std::string& path) {
  auto data = std::make_shared<std::string>();
  {
    std::lock_guard lock(mu_);
    files_[path] = data;
  }
  return std::make_unique<MemWritableFile>(*this, std::move(data));
}

std::shared_ptr<RandomAccessFile> MemEnv::open_random(const std::string& path) {
  std::lock_guard lock(mu_);
  auto it = files_.find(path);
  if (it == files_.end()) throw Error(ErrorCode::kIoError, "no such in-memory file " + path);
  return std::make_shared<MemRandomAccessFile>(it->second);
}

bool MemEnv::exists(const std::string& path) {
  std::lock_guard lock(mu_);
  if (files_.count(path)) return true;
  const std::string prefix = path + "/";
  auto it = files_.lower_bound(prefix);
  return it != files_.end() && it->first.compare(0, prefix.size(), prefix) == 0;
}

void MemEnv::remove(const std::string& path) {
  std::lock_guard lock(mu_);
  files_.erase(path);
}

void MemEnv::rename(const std::string& from, const std::string& to) {
  std::lock_guard lock(mu_);
  auto it = files_.find(from);
  if (it == files_.end()) throw Error(ErrorCode::kIoError, "rename of missing file " + from);
  auto data = it->second;
  files_.erase(it);
  files_[to] = std::move(data);
}

void MemEnv::create_dir(const std::string&) {}

std::vector<std::string> MemEnv::list_dir(const std::string& path) {
  std::lock_guard lock(mu_);
  std::vector<std::string> names;
  const std::string prefix = path.empty() || path.back() == '/' ? path : path + "/";
  for (auto it = files_.lower_bound(prefix);
       it != files_.end() && it->first.compare(0, prefix.size(), prefix) == 0; ++it) {
    const std::string rest = it->first.substr(prefix.size());
    if (rest.find('/') == std::string::npos) names.push_back(rest);
  }
  return names;
}

std::unique_ptr<MemEnv> MemEnv::clone() const {
  auto copy = std::make_unique<MemEnv>();
  std::lock_guard lock(mu_);
  for (const auto& [path, data] : files_) {
    copy->files_[path] = std::make_shared<std::string>(*data);
  }
  return copy;
}

void MemEnv::set_write_budget(std::optional<uint64_t> bytes) {
  std::lock_guard lock(mu_);
  budget_ = bytes;
}

void MemEnv::flip_bit(const std::string& path, uint64_t bit) {
  std::lock_guard lock(mu_);
  auto it = files_.find(path);
  if (it == files_.end()) throw Error(ErrorCode::kIoError, "no such in-memory file " + path);
  // Readers hold the old buffer; replace rather than mutate.
  auto data = std::make_shared<std::string>(*it->second);
  (*data)[bit / 8] = static_cast<char>((*data)[bit / 8] ^ (1 << (bit % 8)));
  it->second = std::move(data);
}

}  // namespace plsm::lsm
