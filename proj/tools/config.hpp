#ifndef SLICEOP_TOOLS_CONFIG_HPP
#define SLICEOP_TOOLS_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "sliceop/domain.hpp"

namespace sliceop_cli {

/// A fully validated run description, assembled from an optional config
/// file (ini-style sections of key = value lines, unknown keys rejected)
/// with command-line flags taking precedence.
struct RunConfig {
  std::string domain = "diskslice";
  double alpha = 0.25, beta = 0.75, xi = 0.5;

  std::string equation = "poisson";
  int degree = 30;
  std::vector<std::string> rhs;  // "builtin:NAME" or "expr:STRING"
  std::string vcoeff = "builtin:one";
  double k = 0.0;
  double bc_const = 0.0;

  std::string out_dir = "out";
  int grid = 201;
  std::string cache_dir;

  std::string op = "Dx";  // spy target
  std::string params;     // basis parameters "a,b,c[,d]" (spy/cache)

  sliceop::Domain make_domain() const;
  sliceop::BasisParams parse_params() const;
  void validate() const;
};

/// Parses the config file into cfg.  Unknown sections or keys throw
/// std::invalid_argument.
void load_config_file(const std::string& path, RunConfig& cfg);

}  // namespace sliceop_cli

#endif
