#include "sliceop/table_cache.hpp"

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sliceop/errors.hpp"

namespace sliceop {

namespace {

constexpr const char* kFormatTag = "sliceop-table v1";

uint64_t fnv1a(const std::string& data) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string domain_line(const Domain& d) {
  std::ostringstream os;
  os << "domain " << d.name() << " alpha " << fmt(d.alpha()) << " beta " << fmt(d.beta())
     << " xi " << fmt(d.xi());
  return os.str();
}

std::string weight_line(const WeightSpec& w) {
  std::ostringstream os;
  os << "weight lo " << fmt(w.lo) << " hi " << fmt(w.hi) << " exp_hi " << fmt(w.exp_hi)
     << " exp_lo " << fmt(w.exp_lo) << " exp_omx " << fmt(w.exp_omx) << " exp_opx "
     << fmt(w.exp_opx) << " exp_aff " << fmt(w.exp_aff) << " slope " << fmt(w.aff_slope);
  return os.str();
}

}  // namespace

std::string table_file_name(const Domain& domain, const WeightSpec& weight) {
  std::ostringstream os;
  os << domain_line(domain) << "|" << weight_line(weight);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(os.str()));
  return std::string("table_") + buf + ".tbl";
}

bool table_file_exists(const std::string& path) { return std::filesystem::exists(path); }

void save_table(const std::string& path, const Domain& domain, const RecurrenceTable& table) {
  std::ostringstream payload;
  payload << kFormatTag << "\n";
  payload << domain_line(domain) << "\n";
  payload << weight_line(table.weight) << "\n";
  payload << "n " << table.size() << "\n";
  payload << "omega " << fmt(table.omega) << "\n";
  payload << "alpha";
  for (double v : table.alpha) payload << " " << fmt(v);
  payload << "\nbeta";
  for (double v : table.beta) payload << " " << fmt(v);
  payload << "\n";

  const std::string body = payload.str();
  char sum[32];
  std::snprintf(sum, sizeof sum, "%016" PRIx64, fnv1a(body));

  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp);
    os << body << "checksum " << sum << "\n";
  }
  std::filesystem::rename(tmp, path);
}

RecurrenceTable load_table(const std::string& path, const Domain& domain) {
  std::ifstream is(path);
  if (!is) throw CorruptCacheError("cannot open " + path);
  std::string line;
  std::ostringstream payload;
  std::string checksum;
  std::vector<std::string> lines;
  while (std::getline(is, line)) {
    if (line.rfind("checksum ", 0) == 0) {
      checksum = line.substr(9);
      break;
    }
    payload << line << "\n";
    lines.push_back(line);
  }
  char sum[32];
  std::snprintf(sum, sizeof sum, "%016" PRIx64, fnv1a(payload.str()));
  if (checksum != sum) throw CorruptCacheError("checksum mismatch in " + path);
  if (lines.size() < 7 || lines[0] != kFormatTag)
    throw CorruptCacheError("unrecognized format in " + path);
  if (lines[1] != domain_line(domain))
    throw CorruptCacheError("domain descriptor mismatch in " + path);

  RecurrenceTable t;
  {
    std::istringstream ws(lines[2]);
    std::string tag, k;
    ws >> tag;
    if (tag != "weight") throw CorruptCacheError("bad weight line in " + path);
    auto rd = [&](double& v) {
      ws >> k >> v;
      if (!ws) throw CorruptCacheError("bad weight line in " + path);
    };
    rd(t.weight.lo);
    rd(t.weight.hi);
    rd(t.weight.exp_hi);
    rd(t.weight.exp_lo);
    rd(t.weight.exp_omx);
    rd(t.weight.exp_opx);
    rd(t.weight.exp_aff);
    rd(t.weight.aff_slope);
  }
  int n = 0;
  {
    std::istringstream ns(lines[3]);
    std::string tag;
    ns >> tag >> n;
    if (tag != "n" || n < 0) throw CorruptCacheError("bad size line in " + path);
  }
  {
    std::istringstream osm(lines[4]);
    std::string tag;
    osm >> tag >> t.omega;
    if (tag != "omega") throw CorruptCacheError("bad omega line in " + path);
  }
  auto read_vec = [&](const std::string& src, const char* tag, std::vector<double>& out) {
    std::istringstream vs(src);
    std::string head;
    vs >> head;
    if (head != tag) throw CorruptCacheError("bad coefficient line in " + path);
    out.resize(n);
    for (int i = 0; i < n; ++i) {
      vs >> out[i];
      if (!vs) throw CorruptCacheError("truncated coefficient line in " + path);
    }
  };
  read_vec(lines[5], "alpha", t.alpha);
  read_vec(lines[6], "beta", t.beta);
  return t;
}

}  // namespace sliceop
