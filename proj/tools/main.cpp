#include <string>
#include <vector>

#include "semcomm/cli.hpp"

int main(int argc, char** argv) {
  return semcomm::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
