#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

namespace cli {

struct Result {
  int code = -1;
  std::string output;
};

/// Runs the csmri binary with `args`, capturing stdout and stderr.
inline Result run(const std::string& args) {
  const std::string cmd = std::string(CSMRI_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::filesystem::path scratch_dir() {
  const std::filesystem::path dir = CSMRI_TEST_TMP;
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace cli
