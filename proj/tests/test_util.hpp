#pragma once

// Shared helpers for the test binaries: error-code capture, scratch
// directories under the working directory, and whole-file byte access.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "iris/errors.hpp"

namespace testutil {

// Runs fn, requires it to throw iris::Error, and returns the code.
inline iris::Errc error_code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const iris::Error& e) {
    return e.code();
  }
  FAIL("expected an iris::Error, none thrown");
  return iris::Errc::io_error;  // unreachable
}

// A scratch directory (re)created empty on construction, removed on
// destruction. Lives under the test working directory.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name) : path_(std::filesystem::path("scratch") / name) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::vector<unsigned char> read_file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(static_cast<bool>(in), "cannot open " << p.string());
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>());
}

inline std::string read_file_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(static_cast<bool>(in), "cannot open " << p.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  REQUIRE_MESSAGE(static_cast<bool>(out), "cannot create " << p.string());
  out << text;
}

}  // namespace testutil
