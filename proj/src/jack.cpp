#include "cbm/jack.hpp"

#include <json.hpp>
#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "cbm/errors.hpp"

namespace fs = std::filesystem;

namespace cbm::jack {

namespace {

std::atomic<unsigned> g_k_max{12};

}  // namespace

unsigned k_max() { return g_k_max.load(); }

void set_k_max(unsigned k) {
  if (k == 0) throw std::domain_error("k_max must be at least 1");
  g_k_max.store(k);
}

Rat c_lambda(const Partition& lambda, const Rat& alpha) {
  if (alpha <= 0) throw std::domain_error("alpha must be positive");
  Partition conj = lambda.conjugate();
  Rat prod(1);
  for (const Cell& c : lambda.cells()) {
    // arm = lambda_i - j, leg = lambda'_j - i
    long arm = long(lambda.part(c.row)) - long(c.col);
    long leg = long(conj.part(c.col)) - long(c.row);
    Rat base = alpha * arm + leg;
    prod *= (base + 1) * (base + alpha);
  }
  return prod;
}

std::size_t JackTable::index_of(const Partition& p) const {
  for (std::size_t i = 0; i < order.size(); ++i)
    if (order[i] == p) return i;
  throw std::invalid_argument("partition of wrong weight for this table");
}

const Rat& JackTable::theta_at(const Partition& lambda, const Partition& rho) const {
  return theta[index_of(lambda)][index_of(rho)];
}

namespace detail {

namespace {

// Coefficients of p_rho in the monomial basis: multiply the running
// expansion (a partition -> coefficient map) by one power sum p_r.
// p_r m_lambda = sum over distinct values v of lambda (and v = 0 for a new
// part) of m_{v+r}(mu) m_mu, where mu is lambda with one v bumped to v+r.
std::map<Partition, mpz_class> multiply_power_sum(const std::map<Partition, mpz_class>& in,
                                                  unsigned r) {
  std::map<Partition, mpz_class> out;
  for (const auto& [lam, coeff] : in) {
    std::vector<unsigned> values{0};
    for (unsigned v : lam.parts())
      if (v != values.back()) values.push_back(v);
    for (unsigned v : values) {
      std::vector<unsigned> parts = lam.parts();
      if (v == 0) {
        parts.push_back(r);
      } else {
        for (unsigned& p : parts)
          if (p == v) {
            p = v + r;
            break;
          }
      }
      std::sort(parts.begin(), parts.end(), std::greater<unsigned>());
      Partition mu(std::move(parts));
      out[mu] += coeff * mu.multiplicity(v + r);
    }
  }
  return out;
}

}  // namespace

std::vector<std::size_t> default_processing_order(unsigned k) {
  std::size_t p = enumerate_partitions(k).size();
  std::vector<std::size_t> order(p);
  for (std::size_t i = 0; i < p; ++i) order[i] = p - 1 - i;
  return order;
}

JackTable build_via_gram_schmidt(unsigned k, const Rat& alpha,
                                 std::span<const std::size_t> processing_order) {
  std::vector<Partition> parts = enumerate_partitions(k);
  const std::size_t p = parts.size();
  std::map<Partition, std::size_t> index;
  for (std::size_t i = 0; i < p; ++i) index[parts[i]] = i;

  // R[i][j]: coefficient of m_{parts[j]} in p_{parts[i]}. Every monomial of
  // a power-sum product merges parts of rho, which moves up in dominance,
  // so R is lower triangular in the descending enumeration order.
  std::vector<std::vector<mpz_class>> R(p, std::vector<mpz_class>(p, mpz_class(0)));
  for (std::size_t i = 0; i < p; ++i) {
    std::map<Partition, mpz_class> expansion{{Partition{}, mpz_class(1)}};
    for (unsigned r : parts[i].parts()) expansion = multiply_power_sum(expansion, r);
    for (const auto& [lam, coeff] : expansion) R[i][index.at(lam)] = coeff;
  }

  // M = R^{-1}: row lam gives m_lam in p-coordinates.
  std::vector<std::vector<Rat>> M(p, std::vector<Rat>(p, Rat(0)));
  for (std::size_t i = 0; i < p; ++i) {
    Rat diag_inv = make_rat(1, R[i][i]);
    M[i][i] = diag_inv;
    for (std::size_t j = 0; j < i; ++j) {
      Rat s(0);
      for (std::size_t t = j; t < i; ++t)
        if (R[i][t] != 0 && M[t][j] != 0) s += Rat(R[i][t]) * M[t][j];
      if (s != 0) M[i][j] = -s * diag_inv;
    }
  }

  // <p_rho, p_sigma> = delta z_rho alpha^{l(rho)}: the inner product is
  // diagonal in p-coordinates.
  std::vector<Rat> w(p);
  for (std::size_t r = 0; r < p; ++r)
    w[r] = Rat(z_of(parts[r])) * rat_pow(alpha, parts[r].length());
  auto dot = [&](const std::vector<Rat>& u, const std::vector<Rat>& v) {
    Rat s(0);
    for (std::size_t r = 0; r < p; ++r)
      if (u[r] != 0 && v[r] != 0) s += u[r] * v[r] * w[r];
    return s;
  };

  if (processing_order.size() != p)
    throw std::invalid_argument("processing order must cover every partition");

  // Orthogonalise the monomial vectors in ascending dominance order; the
  // orthogonality characterisation makes the result order-independent.
  std::vector<std::vector<Rat>>& J = M;  // orthogonalised in place
  std::vector<Rat> norm_sq(p);
  std::vector<std::size_t> done;
  done.reserve(p);
  for (std::size_t i : processing_order) {
    for (std::size_t j : done) {
      Rat c = dot(J[i], J[j]);
      if (c != 0) {
        c /= norm_sq[j];
        for (std::size_t r = 0; r < p; ++r)
          if (J[j][r] != 0) J[i][r] -= c * J[j][r];
      }
    }
    norm_sq[i] = dot(J[i], J[i]);
    if (norm_sq[i] == 0) throw std::logic_error("degenerate Gram matrix");
    done.push_back(i);
  }

  // J-normalise: scale each row so the coefficient of p_1^k is 1. (1^k) is
  // the last partition in the enumeration order.
  JackTable table;
  table.weight = k;
  table.alpha = alpha;
  table.order = parts;
  table.theta.resize(p);
  table.c_norm.resize(p);
  const std::size_t ones = p - 1;
  for (std::size_t i = 0; i < p; ++i) {
    if (J[i][ones] == 0) throw std::logic_error("vanishing leading coefficient");
    Rat scale = 1 / J[i][ones];
    table.theta[i].resize(p);
    for (std::size_t r = 0; r < p; ++r) table.theta[i][r] = J[i][r] * scale;
    table.c_norm[i] = c_lambda(parts[i], alpha);
  }
  return table;
}

}  // namespace detail

namespace {

std::vector<TableDefect> orthogonality_defects(const JackTable& t) {
  std::vector<TableDefect> defects;
  const std::size_t p = t.order.size();
  std::vector<Rat> w(p);
  for (std::size_t r = 0; r < p; ++r)
    w[r] = Rat(z_of(t.order[r])) * rat_pow(t.alpha, t.order[r].length());
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a; b < p; ++b) {
      Rat row_sum(0), dual_sum(0);
      for (std::size_t r = 0; r < p; ++r) {
        if (t.theta[a][r] != 0 && t.theta[b][r] != 0)
          row_sum += w[r] * t.theta[a][r] * t.theta[b][r];
        if (t.theta[r][a] != 0 && t.theta[r][b] != 0)
          dual_sum += t.theta[r][a] * t.theta[r][b] / t.c_norm[r];
      }
      Rat row_want = (a == b) ? t.c_norm[a] : Rat(0);
      Rat dual_want = (a == b) ? 1 / w[a] : Rat(0);
      if (row_sum != row_want) defects.push_back({'F', t.order[a], t.order[b], row_sum, row_want});
      if (dual_sum != dual_want)
        defects.push_back({'M', t.order[a], t.order[b], dual_sum, dual_want});
    }
  }
  return defects;
}

}  // namespace

std::vector<TableDefect> check_table(const JackTable& t) {
  std::vector<TableDefect> defects;
  const std::size_t p = t.order.size();
  const std::size_t ones = p - 1;
  for (std::size_t i = 0; i < p; ++i) {
    if (t.theta[i][ones] != 1)
      defects.push_back({'N', t.order[i], t.order[ones], t.theta[i][ones], Rat(1)});
    Rat want = c_lambda(t.order[i], t.alpha);
    if (t.c_norm[i] != want || t.c_norm[i] <= 0)
      defects.push_back({'C', t.order[i], t.order[i], t.c_norm[i], want});
  }
  auto ortho = orthogonality_defects(t);
  defects.insert(defects.end(), ortho.begin(), ortho.end());
  return defects;
}

std::vector<TableDefect> verify_orthogonality(unsigned k, const Rat& alpha) {
  return orthogonality_defects(*build_jack_table(k, alpha));
}

std::string table_to_json(const JackTable& t) {
  nlohmann::ordered_json doc;
  doc["k"] = t.weight;
  doc["alpha"] = rat_to_string(t.alpha);
  auto& order = doc["order"] = nlohmann::ordered_json::array();
  for (const Partition& p : t.order) order.push_back(p.to_string());
  auto& theta = doc["theta"] = nlohmann::ordered_json::array();
  for (const auto& row : t.theta) {
    nlohmann::ordered_json jrow = nlohmann::ordered_json::array();
    for (const Rat& v : row) jrow.push_back(rat_to_string(v));
    theta.push_back(std::move(jrow));
  }
  auto& c = doc["c"] = nlohmann::ordered_json::array();
  for (const Rat& v : t.c_norm) c.push_back(rat_to_string(v));
  return doc.dump(2) + "\n";
}

std::optional<JackTable> table_from_json(std::string_view text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) return std::nullopt;
  try {
    JackTable t;
    t.weight = doc.at("k").get<unsigned>();
    if (t.weight == 0) return std::nullopt;
    t.alpha = rat_from_string(doc.at("alpha").get<std::string>());
    std::vector<Partition> expected = enumerate_partitions(t.weight);
    const auto& order = doc.at("order");
    if (order.size() != expected.size()) return std::nullopt;
    for (std::size_t i = 0; i < expected.size(); ++i)
      if (order[i].get<std::string>() != expected[i].to_string()) return std::nullopt;
    t.order = std::move(expected);
    const std::size_t p = t.order.size();
    const auto& theta = doc.at("theta");
    if (theta.size() != p) return std::nullopt;
    t.theta.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
      if (theta[i].size() != p) return std::nullopt;
      t.theta[i].reserve(p);
      for (std::size_t j = 0; j < p; ++j)
        t.theta[i].push_back(rat_from_string(theta[i][j].get<std::string>()));
    }
    const auto& c = doc.at("c");
    if (c.size() != p) return std::nullopt;
    t.c_norm.reserve(p);
    for (std::size_t i = 0; i < p; ++i)
      t.c_norm.push_back(rat_from_string(c[i].get<std::string>()));
    return t;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

namespace {

struct CacheSlot {
  std::once_flag once;
  JackTablePtr table;
};

std::mutex g_cache_mutex;
std::map<std::string, std::shared_ptr<CacheSlot>> g_cache;

std::optional<fs::path> cache_dir() {
  if (const char* env = std::getenv("CBM_CACHE_DIR"); env && *env) return fs::path(env);
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
    return fs::path(xdg) / "cbmoments";
  if (const char* home = std::getenv("HOME"); home && *home)
    return fs::path(home) / ".cache" / "cbmoments";
  return std::nullopt;
}

fs::path cache_file(const fs::path& dir, unsigned k, const Rat& alpha) {
  std::string name = "jack-k" + std::to_string(k) + "-a" + alpha.get_num().get_str() + "_" +
                     alpha.get_den().get_str() + ".json";
  return dir / name;
}

JackTablePtr load_cached(const fs::path& file, unsigned k, const Rat& alpha) {
  std::ifstream in(file);
  if (!in) return nullptr;
  std::stringstream buf;
  buf << in.rdbuf();
  auto parsed = table_from_json(buf.str());
  if (!parsed || parsed->weight != k || parsed->alpha != alpha) return nullptr;
  if (!check_table(*parsed).empty()) return nullptr;
  return std::make_shared<const JackTable>(std::move(*parsed));
}

void store_cached(const fs::path& dir, const fs::path& file, const JackTable& t) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return;
  static std::atomic<unsigned> counter{0};
  fs::path tmp = file;
  tmp += ".tmp" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << table_to_json(t);
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      return;
    }
  }
  fs::rename(tmp, file, ec);
  if (ec) fs::remove(tmp, ec);
}

}  // namespace

JackTablePtr build_jack_table(unsigned k, const Rat& alpha) {
  if (k < 1) throw std::domain_error("table weight must be at least 1");
  if (k > k_max())
    throw capacity_error("capacity: weight " + std::to_string(k) + " exceeds K_max " +
                         std::to_string(k_max()));
  if (alpha <= 0) throw std::domain_error("alpha must be positive");

  std::shared_ptr<CacheSlot> slot;
  std::string key = std::to_string(k) + ":" + rat_to_string(alpha);
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto& entry = g_cache[key];
    if (!entry) entry = std::make_shared<CacheSlot>();
    slot = entry;
  }
  std::call_once(slot->once, [&] {
    auto dir = cache_dir();
    if (dir) {
      if (auto cached = load_cached(cache_file(*dir, k, alpha), k, alpha)) {
        slot->table = cached;
        return;
      }
    }
    auto order = detail::default_processing_order(k);
    slot->table = std::make_shared<const JackTable>(
        detail::build_via_gram_schmidt(k, alpha, order));
    if (dir) store_cached(*dir, cache_file(*dir, k, alpha), *slot->table);
  });
  return slot->table;
}

Rat theta(const Partition& lambda, const Partition& rho, const Rat& alpha) {
  if (lambda.weight() != rho.weight())
    throw std::invalid_argument("theta requires |lambda| = |rho|");
  if (lambda.weight() == 0) return Rat(1);
  return build_jack_table(lambda.weight(), alpha)->theta_at(lambda, rho);
}

Rat big_theta(const Partition& lambda, const Partition& rho, const Rat& alpha) {
  if (lambda.weight() != rho.weight())
    throw std::invalid_argument("big_theta requires |lambda| = |rho|");
  if (lambda.weight() == 0) return Rat(1);
  return rat_pow(alpha, rho.length()) * Rat(z_of(rho)) / c_lambda(lambda, alpha) *
         theta(lambda, rho, alpha);
}

void clear_cache() {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  g_cache.clear();
}

}  // namespace cbm::jack
