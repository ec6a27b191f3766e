#ifndef NERFORGE_TOOLS_FETCH_SNAPSHOT_HPP
#define NERFORGE_TOOLS_FETCH_SNAPSHOT_HPP

#include <string>

namespace nerforge::tools {

struct FetchArgs {
  std::string seeds_file;
  int depth = 1;
  std::string host = "ru.wikipedia.org";
  std::string category_prefix = "Категория:";
  bool fetch_linked = false;
  std::string output;
};

// Crawls the MediaWiki API from the seed categories and writes a snapshot in
// the JSON Lines format read by load_snapshot. The only networked code path.
void fetch_snapshot(const FetchArgs& args);

}  // namespace nerforge::tools

#endif  // NERFORGE_TOOLS_FETCH_SNAPSHOT_HPP
