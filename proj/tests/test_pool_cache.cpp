#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>

#include "sliceop/errors.hpp"
#include "sliceop/table_cache.hpp"
#include "sliceop/table_pool.hpp"

using namespace sliceop;

TEST_CASE("pool serves ladder-built tables that match direct bootstraps") {
  Domain d = Domain::disk_slice(0.25, 0.75);
  TablePool pool(d);
  auto t7 = pool.r_table(1, 1, 7, 24);
  RecurrenceTable direct = bootstrap_recurrence(WeightSpec::r_weight(d, 1, 1, 7), 24);
  for (int n = 0; n < 20; ++n) {
    CHECK(std::abs(t7->alpha[n] - direct.alpha[n]) <= 1e-10);
    CHECK(std::abs(t7->beta[n] - direct.beta[n]) <= 1e-10);
  }
  // rules share the cached tables
  auto r = pool.r_rule(1, 1, 7, 12);
  CHECK(r->size() >= 12);
}

TEST_CASE("trapezium pools bootstrap each exponent directly") {
  TablePool pool(Domain::trapezium(0.5));
  auto t = pool.p_table(2, 1, 16);  // shifted Jacobi, closed form
  RecurrenceTable ref = bootstrap_recurrence(t->weight, 12);
  for (int n = 0; n < 12; ++n) {
    CHECK(std::abs(t->alpha[n] - ref.alpha[n]) <= 1e-12);
    CHECK(std::abs(t->beta[n] - ref.beta[n]) <= 1e-12);
  }
  CHECK(std::abs(t->omega - ref.omega) <= 1e-12 * ref.omega);
}

TEST_CASE("cache files round-trip and detect corruption") {
  namespace fs = std::filesystem;
  const std::string dir = fs::temp_directory_path() / "sliceop_cache_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  Domain d = Domain::end_disk_slice(0.2);
  RecurrenceTable t = bootstrap_recurrence(WeightSpec::r_weight(d, 0, 1, 3), 20);
  const std::string path = dir + "/" + table_file_name(d, t.weight);

  save_table(path, d, t);
  RecurrenceTable back = load_table(path, d);
  CHECK(back.size() == t.size());
  CHECK(back.omega == t.omega);  // round-trip through %.17g is exact
  for (int n = 0; n < t.size(); ++n) {
    CHECK(back.alpha[n] == t.alpha[n]);
    CHECK(back.beta[n] == t.beta[n]);
  }
  CHECK(back.weight == t.weight);

  SUBCASE("bit flip breaks the checksum") {
    std::ifstream is(path);
    std::string content((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    const auto pos = content.find("0.");
    content[pos + 2] = content[pos + 2] == '5' ? '6' : '5';
    std::ofstream(path, std::ios::trunc) << content;
    CHECK_THROWS_AS(load_table(path, d), CorruptCacheError);
  }
  SUBCASE("domain mismatch is rejected") {
    CHECK_THROWS_AS(load_table(path, Domain::end_disk_slice(0.3)), CorruptCacheError);
  }
  SUBCASE("a warm pool re-reads its own flushes") {
    {
      TablePool pool(d, Settings{}, dir);
      pool.r_table(0, 1, 3, 16);
      pool.flush_cache();
    }
    TablePool pool2(d, Settings{}, dir);
    auto t2 = pool2.r_table(0, 1, 3, 16);
    CHECK(t2->size() >= 16);
    for (int n = 0; n < 10; ++n) CHECK(std::abs(t2->alpha[n] - t.alpha[n]) <= 1e-12);
  }
  fs::remove_all(dir);
}
