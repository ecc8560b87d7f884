#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wmms/instance.hpp"

namespace wmms {

// Empirical value source: positive bid amounts grouped by category.
struct BidPool {
  std::map<std::string, std::vector<Rat>> categories;

  std::size_t category_count() const { return categories.size(); }
};

// Reads a `category,bid` CSV (header required). Bids parse as exact decimals
// and must be positive; malformed rows are rejected with their line number.
// Throws ValidationError on a missing file or an empty pool.
BidPool ingest_bids(const std::filesystem::path& path);

// Samples m distinct categories, then draws each agent's value for item j
// uniformly from category j's bid list (independently per agent).
// Entitlements default to equal. Deterministic under the seed.
Instance instance_from_bids(const BidPool& pool, std::size_t n, std::size_t m,
                            std::uint64_t seed);

// Writes a seeded synthetic pool with the same schema as the real dataset,
// used for hermetic tests and as a stand-in when no bid file is given.
BidPool synthetic_bid_pool(std::size_t categories, std::size_t bids_per_category,
                           std::uint64_t seed);

}  // namespace wmms
