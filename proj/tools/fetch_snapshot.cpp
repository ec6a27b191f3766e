#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "fetch_snapshot.hpp"

#include <chrono>
#include <deque>
#include <map>
#include <regex>
#include <set>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "nerforge/error.hpp"
#include "nerforge/io.hpp"
#include "nerforge/utf8.hpp"

namespace nerforge::tools {
namespace {

using Json = nlohmann::json;

class ApiClient {
 public:
  explicit ApiClient(const std::string& host) : client_("https://" + host) {
    client_.set_follow_location(true);
    client_.set_read_timeout(30);
    client_.set_default_headers(
        {{"User-Agent", "nerforge-snapshot-fetcher/1.0 (offline NER dataset tooling)"}});
  }

  Json get(httplib::Params params) {
    params.emplace("format", "json");
    params.emplace("formatversion", "2");
    for (int attempt = 0;; ++attempt) {
      auto res = client_.Get("/w/api.php", params, httplib::Headers{});
      if (res && res->status == 200) {
        Json body = Json::parse(res->body);
        if (body.contains("error")) {
          throw Error("API error: " + body["error"].value("info", std::string("?")));
        }
        return body;
      }
      if (attempt == 3) {
        throw Error("request failed: " +
                    (res ? "HTTP " + std::to_string(res->status)
                         : httplib::to_string(res.error())));
      }
      std::this_thread::sleep_for(std::chrono::seconds(1 << attempt));
    }
  }

  // Runs a query and follows "continue" tokens, calling fn on every page.
  template <typename Fn>
  void query_all(httplib::Params params, Fn&& fn) {
    Json cont;
    for (;;) {
      httplib::Params p = params;
      if (cont.is_object()) {
        for (const auto& [k, v] : cont.items()) {
          p.erase(k);
          p.emplace(k, v.template get<std::string>());
        }
      }
      Json body = get(p);
      fn(body);
      if (!body.contains("continue")) return;
      cont = body["continue"];
    }
  }

 private:
  httplib::Client client_;
};

std::string strip_namespace(const std::string& title, const std::string& prefix) {
  if (title.starts_with(prefix)) return title.substr(prefix.size());
  const auto colon = title.find(':');
  return colon == std::string::npos ? title : title.substr(colon + 1);
}

struct Members {
  std::vector<std::string> subcategories;
  std::vector<std::string> articles;
};

Members category_members(ApiClient& api, const std::string& name,
                         const std::string& prefix) {
  Members m;
  api.query_all({{"action", "query"},
                 {"list", "categorymembers"},
                 {"cmtitle", prefix + name},
                 {"cmtype", "page|subcat"},
                 {"cmlimit", "max"}},
                [&](const Json& body) {
                  for (const auto& item : body["query"]["categorymembers"]) {
                    const auto title = item["title"].get<std::string>();
                    if (item["ns"] == 14) {
                      m.subcategories.push_back(strip_namespace(title, prefix));
                    } else if (item["ns"] == 0) {
                      m.articles.push_back(title);
                    }
                  }
                });
  return m;
}

std::string extract(ApiClient& api, const std::string& title, bool intro) {
  httplib::Params p{{"action", "query"}, {"prop", "extracts"},
                    {"explaintext", "1"}, {"titles", title}};
  if (intro) p.emplace("exintro", "1");
  const Json body = api.get(p);
  const auto& pages = body["query"]["pages"];
  if (pages.empty() || !pages[0].contains("extract")) return {};
  return pages[0]["extract"].get<std::string>();
}

// Interlink occurrences in wikitext order. Targets are mapped onto the
// canonical titles reported by prop=links; namespaced links are skipped.
std::vector<std::string> interlinks(ApiClient& api, const std::string& title) {
  std::map<std::string, std::string> canonical;
  api.query_all({{"action", "query"}, {"prop", "links"}, {"titles", title},
                 {"plnamespace", "0"}, {"pllimit", "max"}},
                [&](const Json& body) {
                  for (const auto& page : body["query"]["pages"]) {
                    if (!page.contains("links")) continue;
                    for (const auto& link : page["links"]) {
                      const auto t = link["title"].get<std::string>();
                      canonical.emplace(utf8::fold_case(t), t);
                    }
                  }
                });

  const Json parsed = api.get({{"action", "parse"}, {"page", title},
                               {"prop", "wikitext"}, {"redirects", "1"}});
  const std::string wikitext = parsed["parse"]["wikitext"].get<std::string>();
  static const std::regex link_re(R"(\[\[([^\[\]\|#]+)(#[^\[\]\|]*)?(\|[^\[\]]*)?\]\])");
  std::vector<std::string> out;
  for (auto it = std::sregex_iterator(wikitext.begin(), wikitext.end(), link_re);
       it != std::sregex_iterator(); ++it) {
    std::string target = (*it)[1].str();
    if (target.find(':') != std::string::npos) continue;
    for (char& c : target) {
      if (c == '_') c = ' ';
    }
    const auto b = target.find_first_not_of(' ');
    const auto e = target.find_last_not_of(' ');
    if (b == std::string::npos) continue;
    target = target.substr(b, e - b + 1);
    const auto found = canonical.find(utf8::fold_case(target));
    out.push_back(found != canonical.end() ? found->second : target);
  }
  return out;
}

std::vector<std::string> categories(ApiClient& api, const std::string& title,
                                    const std::string& prefix) {
  std::vector<std::string> out;
  api.query_all({{"action", "query"}, {"prop", "categories"}, {"titles", title},
                 {"clshow", "!hidden"}, {"cllimit", "max"}},
                [&](const Json& body) {
                  for (const auto& page : body["query"]["pages"]) {
                    if (!page.contains("categories")) continue;
                    for (const auto& c : page["categories"]) {
                      out.push_back(strip_namespace(c["title"].get<std::string>(), prefix));
                    }
                  }
                });
  return out;
}

}  // namespace

void fetch_snapshot(const FetchArgs& args) {
  ApiClient api(args.host);
  std::string out;

  std::set<std::string> visited;
  std::deque<std::pair<std::string, int>> frontier;
  for (const auto& seed : read_lines(args.seeds_file)) {
    if (visited.insert(seed).second) frontier.emplace_back(seed, 0);
  }
  std::set<std::string> article_titles;
  while (!frontier.empty()) {
    auto [name, distance] = frontier.front();
    frontier.pop_front();
    spdlog::info("category '{}' (distance {})", name, distance);
    const Members m = category_members(api, name, args.category_prefix);
    nlohmann::ordered_json record;
    record["kind"] = "category";
    record["name"] = name;
    record["subcategories"] = m.subcategories;
    record["articles"] = m.articles;
    out += record.dump() + "\n";
    article_titles.insert(m.articles.begin(), m.articles.end());
    if (distance == args.depth) continue;
    for (const auto& sub : m.subcategories) {
      if (visited.insert(sub).second) frontier.emplace_back(sub, distance + 1);
    }
  }

  std::set<std::string> written;
  std::set<std::string> linked;
  auto write_article = [&](const std::string& title) {
    if (!written.insert(title).second) return;
    spdlog::info("article '{}'", title);
    nlohmann::ordered_json record;
    record["kind"] = "article";
    record["title"] = title;
    record["summary"] = extract(api, title, true);
    record["body"] = extract(api, title, false);
    record["categories"] = categories(api, title, args.category_prefix);
    const auto links = interlinks(api, title);
    record["interlinks"] = links;
    linked.insert(links.begin(), links.end());
    out += record.dump() + "\n";
  };
  for (const auto& title : article_titles) write_article(title);
  if (args.fetch_linked) {
    const std::set<std::string> targets = linked;
    for (const auto& title : targets) {
      try {
        write_article(title);
      } catch (const Error& e) {
        spdlog::warn("skipping linked article '{}': {}", title, e.what());
      }
    }
  }
  write_file(args.output, out);
}

}  // namespace nerforge::tools
