#include <string>
#include <vector>

#include "gbbm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gbbm::cli_main(args);
}
