// Regenerates GRAMMAR.md from the rule tables compiled into the library.

#include <cstdio>

#include "tablesem/dataset.hpp"
#include "tablesem/grammar.hpp"

int main(int argc, char** argv) {
  const char* path = argc > 1 ? argv[1] : "GRAMMAR.md";
  tablesem::write_text_file(path, tablesem::grammar_reference());
  std::printf("wrote %s\n", path);
  return 0;
}
