#pragma once

#include <string>
#include <vector>

#include "scholarlite/error.hpp"
#include "scholarlite/types.hpp"

namespace scholarlite {

/// Snapshot directory layout: one subdirectory per (domain, date) holding a
/// manifest.json plus one structured-text file per document. Text files are
/// line-delimited blocks "page<TAB>font_size<TAB>text"; everything is UTF-8.

Result<void> write_snapshot(const SourceSnapshot& snapshot, const std::string& dir);

Result<SourceSnapshot> read_snapshot(const std::string& dir);

/// Reads every snapshot under `root` (direct subdirectories containing a
/// manifest.json), ordered by snapshot date, then domain.
Result<std::vector<SourceSnapshot>> read_snapshot_tree(const std::string& root);

Result<StructuredText> parse_blocks_file(const std::string& path, bool searchable);
std::string format_blocks(const StructuredText& text);

}  // namespace scholarlite
