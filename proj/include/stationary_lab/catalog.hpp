#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stationary_lab/run_config.hpp"

namespace stationary_lab {

struct CatalogEntry {
  std::string id;
  std::string description;
  /// "printed" (every input stated with the model), "assumed" (a stated input completed with a
  /// documented default) or "transcribed" (taken from a cited source).
  std::string provenance;
  std::vector<std::string> figures;
  RunConfig config;
};

struct CatalogFilter {
  std::optional<int> types;
  std::optional<std::string> process;
  std::optional<std::string> figure;
};

/// All entries in a fixed order.
const std::vector<CatalogEntry>& catalog();

/// Throws std::out_of_range naming the closest ids when the id is unknown.
const CatalogEntry& catalog_get(const std::string& id);

std::vector<CatalogEntry> catalog_list(const CatalogFilter& filter = {});

nlohmann::json to_json(const CatalogEntry& entry);
CatalogEntry catalog_entry_from_json(const nlohmann::json& j);

}  // namespace stationary_lab
