#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  return fragmenta::cli::run(std::vector<std::string>(argv, argv + argc));
}
