#include "sliceop/table_pool.hpp"

#include <filesystem>

#include "sliceop/table_cache.hpp"

namespace sliceop {

namespace {
// Round length requests up so repeated small increases reuse one build.
int round_len(int len) { return len <= 32 ? 32 : (len + 63) / 64 * 64; }
}  // namespace

TablePool::TablePool(Domain domain, Settings settings, std::string cache_dir)
    : domain_(std::move(domain)), settings_(settings), cache_dir_(std::move(cache_dir)) {
  if (!cache_dir_.empty()) std::filesystem::create_directories(cache_dir_);
}

TableRef TablePool::r_table(double a, double b, double e, int min_len) {
  return ensure_r(a, b, e, min_len);
}

TableRef TablePool::ensure_r(double a, double b, double e, int min_len) {
  const RKey key{a, b, e};
  auto it = r_tables_.find(key);
  if (it != r_tables_.end() && it->second->size() >= min_len) return it->second;

  const WeightSpec w = WeightSpec::r_weight(domain_, a, b, e);
  if (!cache_dir_.empty()) {
    const std::string path = cache_dir_ + "/" + table_file_name(domain_, w);
    if (table_file_exists(path)) {
      RecurrenceTable t = load_table(path, domain_);
      if (t.size() >= min_len) {
        auto ref = std::make_shared<const RecurrenceTable>(std::move(t));
        r_tables_[key] = ref;
        return ref;
      }
    }
  }

  const int target = round_len(min_len);
  if (!domain_.is_disk_like() || e < 2) {
    auto ref = std::make_shared<const RecurrenceTable>(
        bootstrap_recurrence(w, target, settings_));
    r_tables_[key] = ref;
    return ref;
  }

  // Walk down the same-parity ladder until a cached table is long enough to
  // climb from (each double lift costs two coefficient pairs), else bottom out
  // and bootstrap the base of the ladder.
  double level = e;
  TableRef base;
  while (level >= 2) {
    auto lower = r_tables_.find(RKey{a, b, level - 2});
    const int need = target + static_cast<int>(e - (level - 2));
    if (lower != r_tables_.end() && lower->second->size() >= need) {
      base = lower->second;
      level -= 2;
      break;
    }
    level -= 2;
  }
  if (!base) {
    const int need = target + static_cast<int>(e - level);
    base = std::make_shared<const RecurrenceTable>(
        bootstrap_recurrence(WeightSpec::r_weight(domain_, a, b, level), need, settings_));
    r_tables_[RKey{a, b, level}] = base;
  }
  while (level < e) {
    RecurrenceTable up = lift_endpoint(*base, Endpoint::PlusOne, settings_);
    up = lift_endpoint(up, Endpoint::MinusOne, settings_);
    level += 2;
    base = std::make_shared<const RecurrenceTable>(std::move(up));
    auto& slot = r_tables_[RKey{a, b, level}];
    if (!slot || slot->size() < base->size()) slot = base;
  }
  return base;
}

TableRef TablePool::p_table(double d, double c, int min_len) {
  const PKey key{d, c};
  auto it = p_tables_.find(key);
  if (it != p_tables_.end() && it->second->size() >= min_len) return it->second;
  RecurrenceTable t = jacobi_recurrence(domain_.gamma(), domain_.delta(), d, c, round_len(min_len));
  t.weight = WeightSpec::p_weight(domain_, d, c);
  auto ref = std::make_shared<const RecurrenceTable>(std::move(t));
  p_tables_[key] = ref;
  return ref;
}

RuleRef TablePool::r_rule(double a, double b, double e, int min_pts) {
  const int pts = (min_pts + 15) / 16 * 16;  // pad so nearby requests share one rule
  const RRuleKey key{a, b, e, pts};
  auto it = r_rules_.find(key);
  if (it != r_rules_.end()) return it->second;
  TableRef t = ensure_r(a, b, e, pts + 1);
  auto ref = std::make_shared<const GaussRule>(gauss_rule(*t, pts, settings_));
  r_rules_[key] = ref;
  return ref;
}

RuleRef TablePool::p_rule(double d, double c, int min_pts) {
  const int pts = (min_pts + 15) / 16 * 16;
  const PRuleKey key{d, c, pts};
  auto it = p_rules_.find(key);
  if (it != p_rules_.end()) return it->second;
  TableRef t = p_table(d, c, pts + 1);
  auto ref = std::make_shared<const GaussRule>(gauss_rule(*t, pts, settings_));
  p_rules_[key] = ref;
  return ref;
}

TableRef TablePool::lookup(const WeightSpec& w) const {
  for (const auto& [key, ref] : r_tables_)
    if (ref->weight == w) return ref;
  return nullptr;
}

void TablePool::flush_cache() const {
  if (cache_dir_.empty()) return;
  for (const auto& [key, ref] : r_tables_) {
    const std::string path = cache_dir_ + "/" + table_file_name(domain_, ref->weight);
    save_table(path, domain_, *ref);
  }
}

}  // namespace sliceop
