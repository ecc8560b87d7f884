#include "wmms/bids.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "wmms/rng.hpp"

namespace wmms {

namespace {

constexpr std::uint64_t kCategoryTag = 0x636174;
constexpr std::uint64_t kDrawTag = 0x647277;

std::string strip(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

BidPool ingest_bids(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open bid file '" + path.string() + "'");

  BidPool pool;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "category,bid")
        throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                              ": expected header 'category,bid'");
      saw_header = true;
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos || comma == 0)
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": expected 'category,bid'");
    std::string category = strip(line.substr(0, comma));
    Rat bid;
    try {
      bid = parse_rational(line.substr(comma + 1));
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (bid <= 0)
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": bid must be positive");
    pool.categories[category].push_back(std::move(bid));
  }
  if (!saw_header) throw ValidationError(path.string() + ": empty bid file");
  if (pool.categories.empty()) throw ValidationError(path.string() + ": no bid rows");
  return pool;
}

Instance instance_from_bids(const BidPool& pool, std::size_t n, std::size_t m,
                            std::uint64_t seed) {
  if (pool.category_count() < m)
    throw ValidationError("bid pool has " + std::to_string(pool.category_count()) +
                          " categories, need " + std::to_string(m));

  std::vector<const std::vector<Rat>*> lists;
  lists.reserve(pool.category_count());
  for (const auto& [name, bids] : pool.categories) lists.push_back(&bids);

  // m distinct categories via a partial shuffle.
  SplitMix64 category_rng(derive_substream(seed, kCategoryTag));
  std::vector<std::size_t> ids(lists.size());
  std::iota(ids.begin(), ids.end(), 0);
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t pick = k + category_rng.next_below(ids.size() - k);
    std::swap(ids[k], ids[pick]);
  }

  std::vector<std::vector<Rat>> values(n, std::vector<Rat>(m));
  for (std::size_t i = 0; i < n; ++i) {
    SplitMix64 rng(derive_substream(seed, kDrawTag, i));
    for (std::size_t j = 0; j < m; ++j) {
      const auto& bids = *lists[ids[j]];
      values[i][j] = bids[rng.next_below(bids.size())];
    }
  }
  return Instance::create(std::move(values),
                          std::vector<Rat>(n, Rat(1) / Rat(static_cast<long>(n))));
}

BidPool synthetic_bid_pool(std::size_t categories, std::size_t bids_per_category,
                           std::uint64_t seed) {
  if (categories == 0 || bids_per_category == 0)
    throw ValidationError("synthetic pool needs categories and bids");
  BidPool pool;
  SplitMix64 rng(seed);
  for (std::size_t c = 0; c < categories; ++c) {
    std::string name = "cat" + std::to_string(c);
    auto& bids = pool.categories[name];
    bids.reserve(bids_per_category);
    for (std::size_t k = 0; k < bids_per_category; ++k) {
      // Two-decimal amounts in [0.01, 100.00], like a currency column.
      long cents = static_cast<long>(rng.next_below(10000)) + 1;
      bids.push_back(make_rat(cents, 100));
    }
  }
  return pool;
}

}  // namespace wmms
