#include "wmms/generators.hpp"

#include <algorithm>
#include <numeric>

namespace wmms {

namespace {

constexpr std::uint64_t kEntitlementTag = 0x656e7469;  // stream labels
constexpr std::uint64_t kAgentRowTag = 0x726f77;
constexpr std::uint64_t kItemColTag = 0x636f6c;

void require_unit_support(const Rat& lo, const Rat& hi) {
  if (lo < 0 || hi > 1 || lo > hi)
    throw ValidationError("distribution support must lie within [0,1]");
}

}  // namespace

Rat sample_distribution(const Distribution& dist, SplitMix64& rng) {
  if (const auto* u = std::get_if<Uniform>(&dist))
    return u->lo + (u->hi - u->lo) * rng.next_unit_rational();
  return std::get<PointMass>(dist).value;
}

Distribution parse_distribution(const std::string& text) {
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "uniform") {
    auto comma = args.find(',');
    if (comma == std::string::npos)
      throw ValidationError("uniform distribution needs 'uniform:lo,hi'");
    Uniform u{parse_rational(args.substr(0, comma)), parse_rational(args.substr(comma + 1))};
    require_unit_support(u.lo, u.hi);
    return u;
  }
  if (kind == "point") {
    PointMass p{parse_rational(args)};
    require_unit_support(p.value, p.value);
    return p;
  }
  throw ValidationError("unknown distribution '" + text + "'");
}

Instance counterexample(std::size_t n, const Rat& epsilon) {
  if (n < 2) throw ValidationError("counterexample needs at least two agents");
  Rat limit = Rat(1) / Rat(static_cast<long>(n - 1));
  if (epsilon <= 0 || epsilon >= limit)
    throw ValidationError("counterexample epsilon must lie in (0, 1/(n-1))");

  const std::size_t m = 2 * n - 1;
  Rat big = 1 - Rat(static_cast<long>(n - 1)) * epsilon;  // 1 - (n-1)e

  std::vector<std::vector<Rat>> values(n, std::vector<Rat>(m, Rat(0)));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) values[i][j] = epsilon;
    values[i][n - 1] = big;
  }
  Rat split = big / Rat(static_cast<long>(n));
  for (std::size_t j = 0; j < n; ++j) values[n - 1][j] = split;
  for (std::size_t j = n; j < m; ++j) values[n - 1][j] = epsilon;

  std::vector<Rat> entitlements(n, epsilon);
  entitlements[n - 1] = big;
  return Instance::create(std::move(values), std::move(entitlements));
}

Example1 example1() {
  std::vector<Rat> row{Rat(4), Rat(4), Rat(4), Rat(3), Rat(9)};
  Example1 fixture{
      Instance::create({row, row}, {make_rat(1, 3), make_rat(2, 3)}),
      Allocation::of(2, 5, {{4}, {0, 1, 2, 3}}),
      Allocation::of(2, 5, {{0, 1}, {2, 3, 4}}),
      make_rat(15, 16),
      Rat(1),
      Rat(8),
  };
  return fixture;
}

Instance stochastic_agents(std::size_t n, std::size_t m,
                           const std::vector<Distribution>& per_agent,
                           std::uint64_t seed) {
  if (per_agent.size() != n)
    throw ValidationError("need one distribution per agent");
  std::vector<std::vector<Rat>> values(n, std::vector<Rat>(m));
  for (std::size_t i = 0; i < n; ++i) {
    SplitMix64 rng(derive_substream(seed, kAgentRowTag, i));
    for (std::size_t j = 0; j < m; ++j) values[i][j] = sample_distribution(per_agent[i], rng);
  }
  return Instance::create(std::move(values),
                          std::vector<Rat>(n, Rat(1) / Rat(static_cast<long>(n))));
}

Instance stochastic_items(std::size_t n, std::size_t m,
                          const std::vector<Distribution>& per_item,
                          std::uint64_t seed) {
  if (per_item.size() != m)
    throw ValidationError("need one distribution per item");
  std::vector<std::vector<Rat>> values(n, std::vector<Rat>(m));
  for (std::size_t j = 0; j < m; ++j) {
    SplitMix64 rng(derive_substream(seed, kItemColTag, j));
    for (std::size_t i = 0; i < n; ++i) values[i][j] = sample_distribution(per_item[j], rng);
  }
  return Instance::create(std::move(values),
                          std::vector<Rat>(n, Rat(1) / Rat(static_cast<long>(n))));
}

std::vector<Rat> random_entitlements(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ValidationError("entitlement vector needs at least one agent");
  SplitMix64 rng(derive_substream(seed, kEntitlementTag));
  std::vector<Rat> draws(n);
  for (auto& d : draws) {
    do {
      d = rng.next_unit_rational();
    } while (d == 0);  // keep every entitlement strictly positive
  }
  Rat sum = std::accumulate(draws.begin(), draws.end(), Rat(0));
  for (auto& d : draws) d /= sum;
  return draws;
}

Allocation proportional_count_allocation(const Instance& instance) {
  const std::size_t n = instance.agent_count();
  const std::size_t m = instance.item_count();

  std::vector<std::size_t> counts(n);
  std::vector<Rat> remainders(n);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rat exact = Rat(static_cast<long>(m)) * instance.entitlement(i);
    mpz_class floor_val;
    mpz_fdiv_q(floor_val.get_mpz_t(), exact.get_num().get_mpz_t(),
               exact.get_den().get_mpz_t());
    counts[i] = floor_val.get_ui();
    remainders[i] = exact - Rat(floor_val);
    assigned += counts[i];
  }

  // Largest-remainder apportionment for the leftover items; remainder ties go
  // to the larger entitlement, then the lower index.
  std::vector<std::size_t> by_remainder(n);
  std::iota(by_remainder.begin(), by_remainder.end(), 0);
  std::sort(by_remainder.begin(), by_remainder.end(), [&](std::size_t a, std::size_t b) {
    if (remainders[a] != remainders[b]) return remainders[a] > remainders[b];
    if (instance.entitlement(a) != instance.entitlement(b))
      return instance.entitlement(a) > instance.entitlement(b);
    return a < b;
  });
  for (std::size_t k = 0; assigned < m; ++k, ++assigned) ++counts[by_remainder[k]];

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return instance.entitlement(a) > instance.entitlement(b);
  });

  std::vector<std::vector<std::size_t>> bundles(n);
  std::size_t next_item = 0;
  for (std::size_t agent : order)
    for (std::size_t k = 0; k < counts[agent]; ++k) bundles[agent].push_back(next_item++);
  return Allocation::of(n, m, std::move(bundles));
}

Instance make_instance(const GeneratorSpec& spec) {
  auto replicated = [&](std::size_t count) {
    std::vector<Distribution> dists = spec.distributions;
    if (dists.empty()) dists.push_back(Uniform{Rat(0), Rat(1)});
    if (dists.size() == 1) dists.assign(count, dists.front());
    if (dists.size() != count)
      throw ValidationError("distribution list length does not match the family");
    return dists;
  };
  switch (spec.family) {
    case GeneratorSpec::Family::counterexample:
      if (!spec.epsilon) throw ValidationError("counterexample family needs epsilon");
      return counterexample(spec.n, *spec.epsilon);
    case GeneratorSpec::Family::example1:
      return example1().instance;
    case GeneratorSpec::Family::stochastic_agents:
      return stochastic_agents(spec.n, spec.m, replicated(spec.n), spec.seed);
    case GeneratorSpec::Family::stochastic_items:
      return stochastic_items(spec.n, spec.m, replicated(spec.m), spec.seed);
    case GeneratorSpec::Family::bids:
      throw ValidationError("bid-backed instances are built from a bid pool");
  }
  throw ValidationError("unknown generator family");
}

}  // namespace wmms
