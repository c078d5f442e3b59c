#include "charp/cli.hpp"

int main(int argc, char** argv) {
    return charp::run_command(std::vector<std::string>(argv + 1, argv + argc));
}
