#ifndef SLICEOP_TABLE_CACHE_HPP
#define SLICEOP_TABLE_CACHE_HPP

#include <optional>
#include <string>

#include "sliceop/domain.hpp"
#include "sliceop/recurrence.hpp"

namespace sliceop {

/// Versioned text record for one recurrence table: descriptor, coefficient
/// arrays, and an FNV-1a checksum over the payload.  Writes go through a
/// temporary file and a rename so readers never see a partial record.
void save_table(const std::string& path, const Domain& domain, const RecurrenceTable& table);

/// Loads a table, validating format version, domain descriptor, weight
/// descriptor, and checksum.  Throws CorruptCacheError on any mismatch.
RecurrenceTable load_table(const std::string& path, const Domain& domain);

/// File name for the table of a given weight (stable across runs).
std::string table_file_name(const Domain& domain, const WeightSpec& weight);

/// Checks existence without parsing.
bool table_file_exists(const std::string& path);

}  // namespace sliceop

#endif
