#pragma once

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#ifndef HUYGENS_CLI
#error "HUYGENS_CLI must name the huygens executable"
#endif

namespace cli {

struct Run {
  int status;
  std::string out;
};

// Runs the huygens executable through the shell and captures stdout
// (stderr too when merge_stderr is set).
inline Run run(const std::string& args, bool merge_stderr = false,
               const std::string& env = "") {
  const std::string cmd = env + " \"" + std::string(HUYGENS_CLI) + "\" " + args +
                          (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int st = pclose(pipe);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

}  // namespace cli
