#include <string>
#include <vector>

#include "lrlstm/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lrlstm::dispatch(args);
}
