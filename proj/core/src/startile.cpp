#include "tilinglab/startile.hpp"

#include <algorithm>
#include <limits>

namespace tilinglab::startile {

std::string rational_to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_from_string(const std::string& s) {
  auto slash = s.find('/');
  Rational q;
  if (slash == std::string::npos)
    q = Rational(s);
  else
    q = Rational(s.substr(0, slash) + "/" + s.substr(slash + 1));
  q.canonicalize();
  return q;
}

StarEnumeration enumerate_stars(const PartiteGraph& g, int t, std::size_t cap) {
  if (t < 1) throw Error(ErrorCode::ConfigError, "t must be a positive integer");
  const int r = g.parts();
  StarEnumeration out;

  for (int i = 0; i < r && !out.truncated; ++i)
    for (int j = 0; j < r && !out.truncated; ++j) {
      if (i == j) continue;
      std::vector<int> small_parts;
      for (int k = 0; k < r; ++k)
        if (k != i && k != j) small_parts.push_back(k);

      for (int c = 0; c < g.part_size() && !out.truncated; ++c) {
        const VertexRef center{i, c};
        const Bitset& bigs = g.neighbors(center, j);
        if (!bigs.any()) continue;
        // candidate small leaves per remaining part
        bool viable = true;
        std::vector<const Bitset*> smalls;
        for (int k : small_parts) {
          const Bitset& nb = g.neighbors(center, k);
          if (!nb.any()) {
            viable = false;
            break;
          }
          smalls.push_back(&nb);
        }
        if (!viable) continue;

        for (std::size_t b = bigs.next(0); b < bigs.size() && !out.truncated;
             b = bigs.next(b + 1)) {
          LabeledStar star;
          star.center = center;
          star.big_leaf = {j, static_cast<int>(b)};
          star.t = t;
          star.small_leaves.resize(small_parts.size());
          auto rec = [&](auto&& self, std::size_t depth) -> void {
            if (out.truncated) return;
            if (depth == small_parts.size()) {
              if (out.stars.size() == cap) {
                out.truncated = true;
                return;
              }
              out.stars.push_back(star);
              return;
            }
            const Bitset& cand = *smalls[depth];
            for (std::size_t v = cand.next(0);
                 v < cand.size() && !out.truncated; v = cand.next(v + 1)) {
              star.small_leaves[depth] = {small_parts[depth],
                                          static_cast<int>(v)};
              self(self, depth + 1);
            }
          };
          rec(rec, 0);
        }
      }
    }
  return out;
}

namespace {

struct SparseColumn {
  // r entries: vertex row and its chi coefficient (1, or t on the big leaf)
  std::vector<std::pair<std::uint32_t, std::int32_t>> entries;
};

SparseColumn star_column(const LabeledStar& star, int n) {
  SparseColumn col;
  auto vid = [n](VertexRef v) {
    return static_cast<std::uint32_t>(v.part * n + v.index);
  };
  col.entries.emplace_back(vid(star.center), 1);
  col.entries.emplace_back(vid(star.big_leaf), star.t);
  for (const VertexRef& leaf : star.small_leaves)
    col.entries.emplace_back(vid(leaf), 1);
  return col;
}

// Phase-1 revised simplex over exact rationals. Minimizes the sum of
// artificial variables for A w + a = 1, w >= 0, a >= 0. Dantzig pricing with
// a Bland fallback after a run of degenerate pivots, so it cannot cycle.
class Phase1Simplex {
 public:
  Phase1Simplex(std::size_t m, const std::vector<SparseColumn>& cols)
      : m_(m), cols_(cols) {
    basis_.resize(m_);
    binv_.assign(m_, std::vector<Rational>(m_, Rational(0)));
    xb_.assign(m_, Rational(1));
    for (std::size_t i = 0; i < m_; ++i) {
      basis_[i] = kArtificialBase + static_cast<std::int64_t>(i);
      binv_[i][i] = 1;
    }
  }

  // true iff feasible (objective reached 0)
  bool run() {
    int degenerate_run = 0;
    while (true) {
      compute_duals();
      const std::int64_t entering = pick_entering(degenerate_run >= 25);
      if (entering < 0) break;  // optimal
      std::vector<Rational> direction = ftran(cols_[entering]);
      const std::int64_t leave_row = ratio_test(direction);
      if (leave_row < 0)
        throw Error(ErrorCode::Internal, "phase-1 claims unboundedness");
      const bool degenerate = xb_[leave_row] == 0;
      degenerate_run = degenerate ? degenerate_run + 1 : 0;
      pivot(static_cast<std::size_t>(leave_row), entering, direction);
      ++pivots_;
    }
    objective_ = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= kArtificialBase) objective_ += xb_[i];
    return objective_ == 0;
  }

  std::uint64_t pivots() const { return pivots_; }
  const std::vector<Rational>& duals() const { return y_; }

  // (column id, value) for every basic structural column with positive value
  std::vector<std::pair<std::size_t, Rational>> basic_solution() const {
    std::vector<std::pair<std::size_t, Rational>> out;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < kArtificialBase && xb_[i] != 0)
        out.emplace_back(static_cast<std::size_t>(basis_[i]), xb_[i]);
    return out;
  }

 private:
  static constexpr std::int64_t kArtificialBase = 1LL << 40;

  void compute_duals() {
    // y = c_B B^-1 with phase-1 costs: 1 on artificial basics, 0 otherwise
    y_.assign(m_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < kArtificialBase) continue;
      for (std::size_t j = 0; j < m_; ++j)
        if (binv_[i][j] != 0) y_[j] += binv_[i][j];
    }
  }

  // reduced cost of structural column j is -(y . A_j); eligible when < 0
  Rational column_price(const SparseColumn& col) const {
    Rational v(0);
    for (const auto& [row, coef] : col.entries)
      if (y_[row] != 0) v += y_[row] * coef;
    return v;  // entering iff v > 0
  }

  std::int64_t pick_entering(bool bland) const {
    std::int64_t best = -1;
    Rational best_value(0);
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      Rational v = column_price(cols_[j]);
      if (v > 0) {
        if (bland) return static_cast<std::int64_t>(j);
        if (v > best_value) {
          best_value = v;
          best = static_cast<std::int64_t>(j);
        }
      }
    }
    return best;
  }

  std::vector<Rational> ftran(const SparseColumn& col) const {
    std::vector<Rational> u(m_, Rational(0));
    for (const auto& [row, coef] : col.entries)
      for (std::size_t i = 0; i < m_; ++i)
        if (binv_[i][row] != 0) u[i] += binv_[i][row] * coef;
    return u;
  }

  std::int64_t ratio_test(const std::vector<Rational>& u) const {
    std::int64_t row = -1;
    Rational best;
    // ties go to the smallest basis id, keeping the Bland fallback honest
    for (std::size_t i = 0; i < m_; ++i) {
      if (u[i] <= 0) continue;
      Rational ratio = xb_[i] / u[i];
      if (row < 0 || ratio < best ||
          (ratio == best && basis_[i] < basis_[row])) {
        best = ratio;
        row = static_cast<std::int64_t>(i);
      }
    }
    return row;
  }

  void pivot(std::size_t row, std::int64_t entering,
             std::vector<Rational>& u) {
    const Rational pivot_value = u[row];
    const Rational theta = xb_[row] / pivot_value;
    for (std::size_t j = 0; j < m_; ++j) binv_[row][j] /= pivot_value;
    xb_[row] = theta;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row || u[i] == 0) continue;
      const Rational factor = u[i];
      for (std::size_t j = 0; j < m_; ++j)
        if (binv_[row][j] != 0) binv_[i][j] -= factor * binv_[row][j];
      xb_[i] -= factor * theta;
    }
    basis_[row] = entering;
  }

  std::size_t m_;
  const std::vector<SparseColumn>& cols_;
  std::vector<std::int64_t> basis_;
  std::vector<std::vector<Rational>> binv_;
  std::vector<Rational> xb_;
  std::vector<Rational> y_;
  Rational objective_;
  std::uint64_t pivots_ = 0;
};

}  // namespace

LpResult solve_fractional(const PartiteGraph& g, int t, std::size_t cap) {
  StarEnumeration enumeration = enumerate_stars(g, t, cap);
  if (enumeration.truncated)
    throw Error(ErrorCode::EnumerationTruncated,
                "star cap hit; the LP needs the complete star set");

  const std::size_t m = g.vertex_count();
  std::vector<SparseColumn> cols;
  cols.reserve(enumeration.stars.size());
  for (const LabeledStar& star : enumeration.stars)
    cols.push_back(star_column(star, g.part_size()));

  Phase1Simplex simplex(m, cols);
  LpResult res;
  res.star_count = enumeration.stars.size();
  if (simplex.run()) {
    res.status = LpStatus::Feasible;
    res.tiling.t = t;
    for (const auto& [col, value] : simplex.basic_solution()) {
      res.tiling.stars.push_back(enumeration.stars[col]);
      res.tiling.weights.push_back(value);
    }
    res.pivots = simplex.pivots();
    std::string why;
    if (!verify_fractional(g, res.tiling, &why))
      throw Error(ErrorCode::Internal, "feasible solution fails verifier: " + why);
    return res;
  }
  res.status = LpStatus::Infeasible;
  res.certificate.x = simplex.duals();
  res.pivots = simplex.pivots();
  std::string why;
  if (!verify_certificate(g, t, res.certificate, &why))
    throw Error(ErrorCode::Internal, "certificate fails verifier: " + why);
  return res;
}

namespace {

bool star_valid(const PartiteGraph& g, const LabeledStar& star, int t,
                std::string* why) {
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  const int r = g.parts();
  if (star.t != t) return fail("star t mismatch");
  if (star.center.part == star.big_leaf.part)
    return fail("center and big leaf share a part");
  if (static_cast<int>(star.small_leaves.size()) != r - 2)
    return fail("wrong small-leaf count");
  std::vector<bool> seen(r, false);
  seen[star.center.part] = true;
  seen[star.big_leaf.part] = true;
  for (const VertexRef& leaf : star.small_leaves) {
    if (leaf.part < 0 || leaf.part >= r || seen[leaf.part])
      return fail("small leaves must cover the remaining parts");
    seen[leaf.part] = true;
  }
  if (!g.adjacent(star.center, star.big_leaf))
    return fail("center not adjacent to big leaf");
  for (const VertexRef& leaf : star.small_leaves)
    if (!g.adjacent(star.center, leaf))
      return fail("center not adjacent to a small leaf");
  return true;
}

}  // namespace

bool verify_fractional(const PartiteGraph& g, const FractionalTiling& ft,
                       std::string* why) {
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (ft.t < 1) return fail("t < 1");
  if (ft.stars.size() != ft.weights.size()) return fail("ragged weight list");
  std::vector<Rational> load(g.vertex_count(), Rational(0));
  auto vid = [&](VertexRef v) {
    return static_cast<std::size_t>(v.part) * g.part_size() + v.index;
  };
  for (std::size_t s = 0; s < ft.stars.size(); ++s) {
    const LabeledStar& star = ft.stars[s];
    const Rational& w = ft.weights[s];
    if (w < 0) return fail("negative weight");
    std::string sub;
    if (!star_valid(g, star, ft.t, &sub)) return fail(sub);
    load[vid(star.center)] += w;
    load[vid(star.big_leaf)] += w * star.t;
    for (const VertexRef& leaf : star.small_leaves) load[vid(leaf)] += w;
  }
  for (std::size_t v = 0; v < load.size(); ++v)
    if (load[v] != 1)
      return fail("vertex " + std::to_string(v) + " has load " +
                  rational_to_string(load[v]));
  return true;
}

bool verify_certificate(const PartiteGraph& g, int t,
                        const FarkasCertificate& cert, std::string* why) {
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  if (cert.x.size() != g.vertex_count()) return fail("certificate length");
  StarEnumeration enumeration = enumerate_stars(g, t);
  if (enumeration.truncated)
    throw Error(ErrorCode::EnumerationTruncated, "star cap hit in verifier");
  auto vid = [&](VertexRef v) {
    return static_cast<std::size_t>(v.part) * g.part_size() + v.index;
  };
  for (const LabeledStar& star : enumeration.stars) {
    Rational dot = cert.x[vid(star.center)];
    dot += cert.x[vid(star.big_leaf)] * star.t;
    for (const VertexRef& leaf : star.small_leaves) dot += cert.x[vid(leaf)];
    if (dot > 0) return fail("a star has positive certificate product");
  }
  Rational total(0);
  for (const Rational& xi : cert.x) total += xi;
  if (!(total > 0)) return fail("x . 1 is not positive");
  return true;
}

Integralization integralize(const FractionalTiling& ft) {
  Integralization out;
  out.denominator = 1;
  for (std::size_t s = 0; s < ft.weights.size(); ++s)
    if (ft.weights[s] > 0) {
      mpz_class den = ft.weights[s].get_den();
      mpz_lcm(out.denominator.get_mpz_t(), out.denominator.get_mpz_t(),
              den.get_mpz_t());
    }
  out.replication.reserve(ft.weights.size());
  for (const Rational& w : ft.weights) {
    Rational scaled = w * Rational(out.denominator);
    scaled.canonicalize();
    if (scaled.get_den() != 1)
      throw Error(ErrorCode::Internal, "lcm failed to clear a denominator");
    out.replication.push_back(scaled.get_num());
  }
  return out;
}

}  // namespace tilinglab::startile
