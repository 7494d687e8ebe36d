#pragma once
// INI run configuration. Blocks are [potential], [run] and [tol]; every value
// a run depends on is read from here, so the config alone reproduces a run.

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "potentials.hpp"

namespace dilute {

// Everything wrong with a config file or a --tol override; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RunConfig {
 public:
  static RunConfig parse(std::istream& in, const std::string& source = "<config>") {
    RunConfig c;
    c.source_ = source;
    // keep raw lines so key errors can point at them
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    {
      std::istringstream lines(text);
      std::string line, section;
      for (unsigned n = 1; std::getline(lines, line); ++n) {
        boost::algorithm::trim(line);
        if (line.empty() || line[0] == ';' || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
          section = line.substr(1, line.size() - 2);
          boost::algorithm::trim(section);
          c.lines_.push_back({section, "", n});
          continue;
        }
        const auto eq = line.find('=');
        if (eq != std::string::npos) {
          std::string key = line.substr(0, eq);
          boost::algorithm::trim(key);
          c.lines_.push_back({section, key, n});
        }
      }
    }
    std::istringstream is(text);
    try {
      boost::property_tree::ini_parser::read_ini(is, c.tree_);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    return c;
  }

  static RunConfig load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    return parse(f, path);
  }

  const std::string& source() const { return source_; }

  bool has_block(const std::string& block) const { return tree_.get_child_optional(block).has_value(); }

  void require_block(const std::string& block) const {
    if (!has_block(block)) throw ConfigError(source_ + ": missing [" + block + "] block");
  }

  bool has(const std::string& block, const std::string& key) const {
    const auto b = tree_.get_child_optional(block);
    return b && b->get_child_optional(boost::property_tree::ptree::path_type(key, '\0'));
  }

  std::string get_string(const std::string& block, const std::string& key) const {
    require_block(block);
    if (!has(block, key)) throw ConfigError(where(block, "") + ": [" + block + "] needs key '" + key + "'");
    return node(block, key);
  }

  std::string get_string(const std::string& block, const std::string& key, const std::string& fallback) const {
    return has(block, key) ? node(block, key) : fallback;
  }

  double get_double(const std::string& block, const std::string& key) const {
    return to_double(block, key, get_string(block, key));
  }

  double get_double(const std::string& block, const std::string& key, double fallback) const {
    return has(block, key) ? to_double(block, key, node(block, key)) : fallback;
  }

  std::vector<double> get_list(const std::string& block, const std::string& key) const {
    const std::string raw = get_string(block, key);
    std::vector<std::string> parts;
    boost::algorithm::split(parts, raw, boost::algorithm::is_any_of(", \t"), boost::algorithm::token_compress_on);
    std::vector<double> out;
    for (auto& p : parts) {
      boost::algorithm::trim(p);
      if (!p.empty()) out.push_back(to_double(block, key, p));
    }
    if (out.empty()) throw ConfigError(where(block, key) + ": empty list for '" + key + "'");
    return out;
  }

  std::vector<double> get_list(const std::string& block, const std::string& key,
                               const std::vector<double>& fallback) const {
    return has(block, key) ? get_list(block, key) : fallback;
  }

  // --tol KEY=VALUE; lands in [tol]
  void apply_override(const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == kv.size())
      throw ConfigError("--tol expects KEY=VALUE, got '" + kv + "'");
    std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    boost::algorithm::trim(key);
    boost::algorithm::trim(value);
    to_double("tol", key, value);
    tree_.put(boost::property_tree::ptree::path_type("tol", '\0'), "");
    tree_.get_child("tol").put(boost::property_tree::ptree::path_type(key, '\0'), value);
    lines_.push_back({"tol", key, 0});
  }

  // "block.key=value" for every entry, in file order; used as metadata
  std::vector<std::string> flatten() const {
    std::vector<std::string> out;
    for (const auto& [block, sub] : tree_)
      for (const auto& [key, v] : sub) out.push_back(block + "." + key + "=" + v.data());
    return out;
  }

 private:
  struct Line {
    std::string block, key;
    unsigned line;
  };

  std::string node(const std::string& block, const std::string& key) const {
    return tree_.get_child(block).get<std::string>(boost::property_tree::ptree::path_type(key, '\0'));
  }

  std::string where(const std::string& block, const std::string& key) const {
    unsigned best = 0;
    for (const auto& l : lines_)
      if (l.block == block && (key.empty() ? l.key.empty() : l.key == key)) best = l.line;
    if (best == 0) return source_;
    return source_ + ":" + std::to_string(best);
  }

  double to_double(const std::string& block, const std::string& key, const std::string& s) const {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || std::isnan(v))
      throw ConfigError(where(block, key) + ": '" + key + "' is not a number: '" + s + "'");
    return v;
  }

  std::string source_;
  boost::property_tree::ptree tree_;
  std::vector<Line> lines_;
};

// [potential]
//   type = hard_core | square_well | piecewise | tabulated
//   hard_core:   R
//   square_well: R and either K or gamma (K = 2γ²/R²)
//   piecewise:   edges = r_1, ..., r_n   values = V_1, ..., V_n   (core = optional)
//   tabulated:   r = ...   V = ...   (shells = 4096)
inline RadialPotential potential_from(const RunConfig& c) {
  c.require_block("potential");
  const std::string type = c.get_string("potential", "type");
  try {
    if (type == "hard_core") return RadialPotential::hard_core(c.get_double("potential", "R"));
    if (type == "square_well") {
      const double R = c.get_double("potential", "R");
      if (c.has("potential", "gamma")) {
        const double g = c.get_double("potential", "gamma");
        return RadialPotential::square_well(2.0 * g * g / (R * R), R);
      }
      return RadialPotential::square_well(c.get_double("potential", "K"), R);
    }
    if (type == "piecewise") {
      const auto edges = c.get_list("potential", "edges"), values = c.get_list("potential", "values");
      if (edges.size() != values.size()) throw ConfigError(c.source() + ": edges and values differ in length");
      std::vector<Piece> ps;
      double lo = c.get_double("potential", "core", 0.0);
      for (std::size_t i = 0; i < edges.size(); ++i) {
        ps.push_back({lo, edges[i], values[i]});
        lo = edges[i];
      }
      return RadialPotential::piecewise(std::move(ps), c.get_double("potential", "core", 0.0));
    }
    if (type == "tabulated") {
      const double shells = c.get_double("potential", "shells", 4096);
      return RadialPotential::tabulated(c.get_list("potential", "r"), c.get_list("potential", "V"),
                                        std::size_t(shells));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(c.source() + ": [potential] " + e.what());
  }
  throw ConfigError(c.source() + ": unknown potential type '" + type + "'");
}

}  // namespace dilute
