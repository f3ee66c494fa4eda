#include <CLI11.hpp>
#include <iostream>

#include "qloop/qring.hpp"

int main(int argc, char** argv) {
  CLI::App app{"quantum loop algebra / equivariant K-theory workbench"};
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (app.get_subcommands().empty()) {
    std::cout << app.help();
    return 0;
  }
  return 0;
}
