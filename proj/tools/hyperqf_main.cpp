#include <iostream>
#include <string>
#include <vector>

#include "hyperqf/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const hyperqf::CliResult r = hyperqf::run_command(args);
  std::cout << r.out;
  if (!r.err.empty()) std::cerr << "hyperqf: " << r.err << '\n';
  return r.exit_code;
}
