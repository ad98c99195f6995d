#include <string>
#include <vector>

#include "sparsespec/cli.hpp"

int main(int argc, char** argv) {
    return sparsespec::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
