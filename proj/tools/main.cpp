#include <iostream>
#include <string>
#include <vector>

#include <adequal/cli_app.hpp>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return adq::run_cli(args, std::cout, std::cerr);
}
