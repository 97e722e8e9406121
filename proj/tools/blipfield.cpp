#include <iostream>
#include <string>
#include <vector>

#include "blipfield/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return blipfield::cli::run(args, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "blipfield: " << e.what() << '\n';
    return blipfield::cli::ExitCode::non_finite;
  }
}
