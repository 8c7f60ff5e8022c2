#include "config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sliceop_cli {

using sliceop::BasisParams;
using sliceop::Domain;

Domain RunConfig::make_domain() const {
  if (domain == "diskslice") return Domain::disk_slice(alpha, beta);
  if (domain == "halfdisk") return Domain::end_disk_slice(alpha);
  if (domain == "trapezium") return Domain::trapezium(xi);
  throw std::invalid_argument("unknown domain '" + domain + "'");
}

BasisParams RunConfig::parse_params() const {
  std::vector<double> v;
  std::stringstream ss(params);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    v.push_back(std::stod(item));
  }
  const Domain dom = make_domain();
  const int want = sliceop::param_arity(dom.kind());
  if (static_cast<int>(v.size()) != want)
    throw std::invalid_argument("expected " + std::to_string(want) + " basis parameters for " +
                                domain + ", got " + std::to_string(v.size()));
  switch (dom.kind()) {
    case sliceop::DomainKind::DiskSlice: return sliceop::disk_slice_params(v[0], v[1], v[2]);
    case sliceop::DomainKind::EndDiskSlice: return sliceop::end_disk_slice_params(v[0], v[1]);
    case sliceop::DomainKind::Trapezium:
      return sliceop::trapezium_params(v[0], v[1], v[2], v[3]);
  }
  throw std::invalid_argument("unreachable");
}

void RunConfig::validate() const {
  make_domain();  // throws on bad geometry numbers
  if (equation != "poisson" && equation != "helmholtz" && equation != "biharmonic")
    throw std::invalid_argument("unknown equation '" + equation + "'");
  if (degree < 1) throw std::invalid_argument("degree must be positive");
  if (grid < 2) throw std::invalid_argument("grid must be at least 2");
  for (const auto& r : rhs)
    if (r.rfind("builtin:", 0) != 0 && r.rfind("expr:", 0) != 0)
      throw std::invalid_argument("rhs must start with 'builtin:' or 'expr:', got '" + r + "'");
}

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file " + path);
  std::string line, section;
  int lineno = 0;
  auto bad = [&](const std::string& what) {
    throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') bad("malformed section header");
      section = line.substr(1, line.size() - 2);
      if (section != "domain" && section != "problem" && section != "output" &&
          section != "cache")
        bad("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto num = [&](double& slot) { slot = std::stod(value); };
    auto inum = [&](int& slot) { slot = std::stoi(value); };
    if (section == "domain") {
      if (key == "kind")
        cfg.domain = value;
      else if (key == "alpha")
        num(cfg.alpha);
      else if (key == "beta")
        num(cfg.beta);
      else if (key == "xi")
        num(cfg.xi);
      else
        bad("unknown key '" + key + "' in [domain]");
    } else if (section == "problem") {
      if (key == "equation")
        cfg.equation = value;
      else if (key == "degree")
        inum(cfg.degree);
      else if (key == "rhs") {
        cfg.rhs.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ';'))
          if (!item.empty()) cfg.rhs.push_back(item);
      } else if (key == "v")
        cfg.vcoeff = value;
      else if (key == "k")
        num(cfg.k);
      else if (key == "bc_const")
        num(cfg.bc_const);
      else if (key == "op")
        cfg.op = value;
      else if (key == "params")
        cfg.params = value;
      else
        bad("unknown key '" + key + "' in [problem]");
    } else if (section == "output") {
      if (key == "dir")
        cfg.out_dir = value;
      else if (key == "grid")
        inum(cfg.grid);
      else
        bad("unknown key '" + key + "' in [output]");
    } else if (section == "cache") {
      if (key == "dir")
        cfg.cache_dir = value;
      else
        bad("unknown key '" + key + "' in [cache]");
    } else {
      bad("key outside of any section");
    }
  }
}

}  // namespace sliceop_cli
