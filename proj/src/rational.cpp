#include "isocat/rational.hpp"

#include <map>
#include <vector>

namespace isocat {

const BigInt& pow_p_cached(std::int64_t p, long k) {
  if (k < 0) throw DomainViolation("pow_p_cached: negative exponent");
  thread_local std::map<std::int64_t, std::vector<BigInt>> cache;
  auto& powers = cache[p];
  if (powers.empty()) powers.push_back(BigInt(1));
  while (static_cast<long>(powers.size()) <= k) powers.push_back(powers.back() * p);
  return powers[static_cast<size_t>(k)];
}

}  // namespace isocat
