#include "app.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return gibbs::app::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
