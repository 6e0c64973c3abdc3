#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace plsm::lsm {

class WritableFile {
 public:
  virtual ~WritableFile() = default;
  virtual void append(std::string_view data) = 0;
  virtual void sync() = 0;
  virtual void close() = 0;
};

class RandomAccessFile {
 public:
  virtual ~RandomAccessFile() = default;
  virtual std::string read(uint64_t offset, size_t n) const = 0;
  virtual uint64_t size() const = 0;
};

// Filesystem seam: the engine never touches files except through an Env.
// All failures throw Error(kIoError).
class Env {
 public:
  virtual ~Env() = default;

  virtual std::unique_ptr<WritableFile> new_writable(const std::string& path) = 0;
  virtual std::shared_ptr<RandomAccessFile> open_random(const std::string& path) = 0;
  virtual bool exists(const std::string& path) = 0;
  virtual void remove(const std::string& path) = 0;
  virtual void rename(const std::string& from, const std::string& to) = 0;
  virtual void create_dir(const std::string& path) = 0;
  virtual std::vector<std::string> list_dir(const std::string& path) = 0;

  std::string read_file(const std::string& path);
  // Writes to path + ".tmp" then renames over path.
  void write_file_atomic(const std::string& path, std::string_view data);

  static Env& posix();
};

// Process-local filesystem for tests and benchmarks. Files are immutable once
// their writer is closed; readers keep removed files alive until released.
class MemEnv final : public Env {
 public:
  std::unique_ptr<WritableFile> new_writable(const std::string& path) override;
  std::shared_ptr<RandomAccessFile> open_random(const std::string& path) override;
  bool exists(const std::string& path) override;
  void remove(const std::string& path) override;
  void rename(const std::string& from, const std::string& to) override;
  void create_dir(const std::string& path) override;
  std::vector<std::string> list_dir(const std::string& path) override;

  // Deep copy of every file, for forking a loaded store into several runs.
  std::unique_ptr<MemEnv> clone() const;

  // After `bytes` more appended bytes every append fails; nullopt disables.
  void set_write_budget(std::optional<uint64_t> bytes);

  // Flips one bit of a stored file (corruption tests).
  void flip_bit(const std::string& path, uint64_t bit);

 private:
  friend class MemWritableFile;
  void consume_budget(size_t n);

  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<std::string>> files_;
  std::optional<uint64_t> budget_;
};

std::string join_path(const std::string& dir, const std::string& name);

}  // namespace plsm::lsm
