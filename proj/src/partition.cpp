#include "cbm/partition.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cbm {

namespace {

void validate_parts(const std::vector<unsigned>& parts) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] == 0) throw std::invalid_argument("partition parts must be positive");
    if (i > 0 && parts[i] > parts[i - 1])
      throw std::invalid_argument("partition parts must be nonincreasing");
  }
}

}  // namespace

Partition::Partition(std::vector<unsigned> parts) : parts_(std::move(parts)) {
  validate_parts(parts_);
}

Partition::Partition(std::initializer_list<unsigned> parts) : parts_(parts) {
  validate_parts(parts_);
}

Partition Partition::parse(std::string_view text) {
  std::vector<unsigned> parts;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string_view tok = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                            : comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (tok.empty()) throw std::invalid_argument("empty component in partition literal");
    unsigned value = 0;
    for (char c : tok) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad partition literal");
      value = value * 10 + unsigned(c - '0');
      if (value > 1000000u) throw std::invalid_argument("partition part out of range");
    }
    parts.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
    if (pos == text.size()) throw std::invalid_argument("trailing comma in partition literal");
  }
  return Partition(std::move(parts));
}

unsigned Partition::weight() const {
  return std::accumulate(parts_.begin(), parts_.end(), 0u);
}

unsigned Partition::part(unsigned i) const {
  if (i == 0) throw std::invalid_argument("partition parts are 1-based");
  return i <= parts_.size() ? parts_[i - 1] : 0u;
}

unsigned Partition::multiplicity(unsigned value) const {
  if (value == 0) return 0;
  return static_cast<unsigned>(std::count(parts_.begin(), parts_.end(), value));
}

Partition Partition::conjugate() const {
  std::vector<unsigned> conj;
  if (!parts_.empty()) {
    conj.resize(parts_[0]);
    for (unsigned j = 1; j <= parts_[0]; ++j)
      conj[j - 1] = static_cast<unsigned>(
          std::count_if(parts_.begin(), parts_.end(), [j](unsigned p) { return p >= j; }));
  }
  return Partition(std::move(conj));
}

std::vector<Cell> Partition::cells() const {
  std::vector<Cell> out;
  for (unsigned i = 1; i <= length(); ++i)
    for (unsigned j = 1; j <= parts_[i - 1]; ++j) out.push_back({i, j});
  return out;
}

std::string Partition::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(parts_[i]);
  }
  return s;
}

Dominance compare_dominance(const Partition& mu, const Partition& nu) {
  if (mu.weight() != nu.weight())
    throw std::invalid_argument("dominance is defined only for equal weights");
  bool mu_leq = true, nu_leq = true;
  unsigned long sum_mu = 0, sum_nu = 0;
  unsigned rows = std::max(mu.length(), nu.length());
  for (unsigned r = 1; r <= rows; ++r) {
    sum_mu += mu.part(r);
    sum_nu += nu.part(r);
    if (sum_mu > sum_nu) mu_leq = false;
    if (sum_nu > sum_mu) nu_leq = false;
  }
  if (mu_leq && nu_leq) return Dominance::equal;
  if (mu_leq) return Dominance::less;
  if (nu_leq) return Dominance::greater;
  return Dominance::incomparable;
}

bool dominance_leq(const Partition& mu, const Partition& nu) {
  Dominance d = compare_dominance(mu, nu);
  return d == Dominance::equal || d == Dominance::less;
}

namespace {

void enumerate_rec(unsigned remaining, unsigned max_part, std::vector<unsigned>& prefix,
                   std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back(Partition(prefix));
    return;
  }
  for (unsigned first = std::min(remaining, max_part); first >= 1; --first) {
    prefix.push_back(first);
    enumerate_rec(remaining - first, first, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Partition> enumerate_partitions(unsigned k) {
  std::vector<Partition> out;
  std::vector<unsigned> prefix;
  enumerate_rec(k, k == 0 ? 1 : k, prefix, out);
  return out;
}

mpz_class z_of(const Partition& lambda) {
  mpz_class z = 1;
  unsigned run_value = 0, run_count = 0;
  auto flush = [&]() {
    if (run_count == 0) return;
    mpz_class pw, fact;
    mpz_ui_pow_ui(pw.get_mpz_t(), run_value, run_count);
    mpz_fac_ui(fact.get_mpz_t(), run_count);
    z *= pw * fact;
  };
  for (unsigned p : lambda.parts()) {
    if (p == run_value) {
      ++run_count;
    } else {
      flush();
      run_value = p;
      run_count = 1;
    }
  }
  flush();
  return z;
}

}  // namespace cbm
