#include "eigencert/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "eigencert/error.hpp"

namespace eigencert {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<int> parse_ints(const std::string& key, const std::string& value) {
  std::istringstream is(value);
  std::vector<int> out;
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError(key + ": '" + tok + "' is not an integer");
    }
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  const std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  std::map<std::string, std::string> kv;  // "section.key" -> value
  std::vector<std::pair<int, std::pair<int, int>>> clusters;
  std::string section, line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "domain" && section != "discretization" && section != "clusters" && section != "bounds")
        throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
    if (section == "clusters") {
      const auto id = parse_ints("clusters", key);
      const auto range = parse_ints("clusters." + key, value);
      if (id.size() != 1 || range.size() != 2)
        throw ConfigError("line " + std::to_string(line_no) + ": cluster lines are 'k = first last'");
      clusters.push_back({id[0], {range[0], range[1]}});
      continue;
    }
    if (!kv.emplace(section + "." + key, value).second)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key " + section + "." + key);
  }

  auto take = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto require = [&](const std::string& key) {
    auto v = take(key);
    if (!v || v->empty()) throw ConfigError("missing required field " + key);
    return *v;
  };

  RunConfig cfg;
  const std::string kind = require("domain.kind");
  if (kind == "unit_square")
    cfg.domain = DomainSpec::unit_square();
  else if (kind == "dumbbell")
    cfg.domain = DomainSpec::dumbbell();
  else
    throw ConfigError("domain.kind: unknown domain '" + kind + "'");

  if (auto e = take("discretization.element")) {
    if (*e == "p1")
      cfg.element = ElementKind::p1;
    else if (*e == "cr")
      cfg.element = ElementKind::cr;
    else
      throw ConfigError("discretization.element: expected p1 or cr, got '" + *e + "'");
  }
  cfg.levels = parse_ints("discretization.levels", require("discretization.levels"));

  std::sort(clusters.begin(), clusters.end());
  std::vector<std::pair<int, int>> bounds;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    if (clusters[k].first != static_cast<int>(k) + 1)
      throw ConfigError("clusters: cluster ids must be 1, 2, ... without gaps");
    bounds.push_back(clusters[k].second);
  }
  if (bounds.empty()) throw ConfigError("missing required section [clusters]");
  try {
    cfg.clusters = ClusterSpec(bounds);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("clusters: ") + e.what());
  }

  const std::string enc = require("bounds.enclosures");
  if (enc == "exact_square") {
    cfg.enclosure_source = EnclosureSource::exact_square;
  } else {
    cfg.enclosure_source = EnclosureSource::file;
    cfg.enclosure_path = resolve(base_dir, enc);
  }
  if (auto ch = take("bounds.ch")) {
    if (*ch == "formula_0493h") {
      cfg.ch_source = ChSource::formula_0493h;
    } else {
      cfg.ch_source = ChSource::file;
      cfg.ch_path = resolve(base_dir, *ch);
    }
  } else if (cfg.domain.kind != DomainKind::unit_square) {
    throw ConfigError("missing required field bounds.ch");
  }
  if (auto it = take("bounds.iterations")) {
    const auto v = parse_ints("bounds.iterations", *it);
    if (v.size() != 1 || v[0] < 0) throw ConfigError("bounds.iterations: expected a non-negative integer");
    cfg.iterations = v[0];
  }
  if (auto m = take("bounds.mode")) {
    if (*m == "exact")
      cfg.mode = EpsilonMode::exact;
    else if (*m == "gershgorin")
      cfg.mode = EpsilonMode::gershgorin;
    else
      throw ConfigError("bounds.mode: expected exact or gershgorin, got '" + *m + "'");
  }
  if (auto x = take("discretization.extra_eigenpairs")) {
    const auto v = parse_ints("discretization.extra_eigenpairs", *x);
    if (v.size() != 1 || v[0] < 1) throw ConfigError("discretization.extra_eigenpairs: expected a positive integer");
    cfg.extra_eigenpairs = v[0];
  }
  if (!kv.empty()) throw ConfigError("unknown key " + kv.begin()->first);
  validate(cfg);
  return cfg;
}

RunConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, path.parent_path());
}

void validate(const RunConfig& cfg) {
  if (cfg.levels.empty()) throw ConfigError("discretization.levels: at least one level is required");
  if (!std::is_sorted(cfg.levels.begin(), cfg.levels.end()) ||
      std::adjacent_find(cfg.levels.begin(), cfg.levels.end()) != cfg.levels.end())
    throw ConfigError("discretization.levels: levels must be strictly ascending");
  const bool square = cfg.domain.kind == DomainKind::unit_square;
  for (int level : cfg.levels)
    if (square ? level < 1 : level < 0) throw ConfigError("discretization.levels: level out of range");
  if (cfg.clusters.size() == 0) throw ConfigError("missing required section [clusters]");
  if (!square && cfg.enclosure_source == EnclosureSource::exact_square)
    throw ConfigError("bounds.enclosures: exact_square is only valid on the unit square; supply an enclosure file");
  if (!square && cfg.ch_source == ChSource::formula_0493h)
    throw ConfigError("bounds.ch: formula_0493h is only valid on the unit square; supply a C_h table");
  if (cfg.iterations < 0) throw ConfigError("bounds.iterations: must be non-negative");
}

}  // namespace eigencert
