#include <vector>

#include "geks/cli.hpp"

int main(int argc, char** argv) {
  return geks::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
