#include <iostream>
#include <string>
#include <vector>

#include "hqflow/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return hqflow::cli::run_cli(args, std::cout, std::cerr);
}
