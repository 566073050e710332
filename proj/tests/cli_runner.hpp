#ifndef TRANSDIFF_TESTS_CLI_RUNNER_HPP
#define TRANSDIFF_TESTS_CLI_RUNNER_HPP

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "transdiff/io.hpp"

namespace transdiff::testutil {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

// runs the tool through the shell so stdout/stderr and the exit code can be
// captured separately; TRANSDIFF_CLI_PATH is injected by the build
inline RunResult run_cli(const std::string& args, const std::string& cwd = {}) {
  static int counter = 0;
  namespace fs = std::filesystem;
  fs::path base = fs::temp_directory_path() /
                  ("transdiff_cli_run_" + std::to_string(::getpid()) + "_" +
                   std::to_string(counter++));
  fs::create_directories(base);
  fs::path out = base / "out", err = base / "err";
  std::string cmd;
  if (!cwd.empty()) cmd += "cd '" + cwd + "' && ";
  cmd += std::string(TRANSDIFF_CLI_PATH) + " " + args + " >'" + out.string() +
         "' 2>'" + err.string() + "'";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  fs::remove_all(base);
  return r;
}

}  // namespace transdiff::testutil

#endif  // TRANSDIFF_TESTS_CLI_RUNNER_HPP
