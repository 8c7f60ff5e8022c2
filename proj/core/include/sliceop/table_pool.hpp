#ifndef SLICEOP_TABLE_POOL_HPP
#define SLICEOP_TABLE_POOL_HPP

#include <map>
#include <memory>
#include <string>
#include <tuple>

#include "sliceop/domain.hpp"
#include "sliceop/gauss.hpp"
#include "sliceop/recurrence.hpp"
#include "sliceop/settings.hpp"

namespace sliceop {

using TableRef = std::shared_ptr<const RecurrenceTable>;
using RuleRef = std::shared_ptr<const GaussRule>;

/// Shared store of univariate recurrence tables and Gauss rules for one
/// domain.  The x-direction families (beta-x)^a (x-alpha)^b rho(x)^e are
/// bootstrapped once per (a,b) at the lowest requested rho-exponent and then
/// climbed in steps of two through endpoint lifts (disk-like domains); the
/// trapezium families are bootstrapped directly since rho there is affine.
/// The t-direction families are classical Jacobi and built in closed form.
///
/// Returned refs are snapshots: the pool may later replace a table with a
/// longer rebuild, but handed-out refs stay valid.
class TablePool {
 public:
  TablePool(Domain domain, Settings settings = {}, std::string cache_dir = {});

  const Domain& domain() const { return domain_; }
  const Settings& settings() const { return settings_; }

  /// Table for (beta-x)^a (x-alpha)^b rho(x)^e with at least min_len pairs.
  TableRef r_table(double a, double b, double e, int min_len);
  /// Table for (delta-t)^d (t-gamma)^c with at least min_len pairs.
  TableRef p_table(double d, double c, int min_len);
  /// Gauss rules over the two families.
  RuleRef r_rule(double a, double b, double e, int min_pts);
  RuleRef p_rule(double d, double c, int min_pts);

  /// Writes every table currently held to the cache directory.
  void flush_cache() const;
  /// Number of tables currently held (diagnostics).
  int table_count() const { return static_cast<int>(r_tables_.size() + p_tables_.size()); }
  /// Finds a held x-family table by its weight descriptor, if any.
  TableRef lookup(const WeightSpec& w) const;

 private:
  using RKey = std::tuple<double, double, double>;
  using PKey = std::tuple<double, double>;
  // rules are additionally bucketed by padded size, so integration work
  // stays proportional to the requesting entry's degree
  using RRuleKey = std::tuple<double, double, double, int>;
  using PRuleKey = std::tuple<double, double, int>;

  TableRef ensure_r(double a, double b, double e, int min_len);

  Domain domain_;
  Settings settings_;
  std::string cache_dir_;
  std::map<RKey, TableRef> r_tables_;
  std::map<PKey, TableRef> p_tables_;
  std::map<RRuleKey, RuleRef> r_rules_;
  std::map<PRuleKey, RuleRef> p_rules_;
};

}  // namespace sliceop

#endif
