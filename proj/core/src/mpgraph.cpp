#include "tilinglab/mpgraph.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>

namespace tilinglab {

PartiteGraph::PartiteGraph(
    int r, int n, std::span<const std::pair<VertexRef, VertexRef>> edges)
    : r_(r), n_(n) {
  if (r < 2) throw Error(ErrorCode::ShapeMismatch, "need r >= 2");
  if (n < 1) throw Error(ErrorCode::ShapeMismatch, "need n >= 1");
  adj_.assign(vertex_count() * r_, Bitset(static_cast<std::size_t>(n_)));
  for (const auto& [u, v] : edges) {
    check_ref(u);
    check_ref(v);
    if (u.part == v.part)
      throw Error(ErrorCode::IntraPartEdge,
                  "edge inside part " + std::to_string(u.part));
    add_edge_unchecked(u, v);
  }
}

void PartiteGraph::add_edge_unchecked(VertexRef u, VertexRef v) {
  Bitset& fwd = row(u, v.part);
  if (fwd.test(static_cast<std::size_t>(v.index))) return;
  fwd.set(static_cast<std::size_t>(v.index));
  row(v, u.part).set(static_cast<std::size_t>(u.index));
  ++edge_count_;
}

std::size_t PartiteGraph::min_cross_degree() const {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < r_; ++j) {
      if (i == j) continue;
      for (int v = 0; v < n_; ++v)
        best = std::min(best, degree({i, v}, j));
    }
  return best;
}

Bitset PartiteGraph::common_neighbors(std::span<const VertexRef> s,
                                      int target_part) const {
  check_part(target_part);
  for (const VertexRef& v : s)
    if (v.part == target_part)
      throw Error(ErrorCode::TargetInSet,
                  "target part " + std::to_string(target_part) +
                      " occurs in the query set");
  Bitset out(static_cast<std::size_t>(n_));
  out.set_all();
  for (const VertexRef& v : s) out &= neighbors(v, target_part);
  return out;
}

PairStats PartiteGraph::pair_stats(int part_a, int part_b) const {
  check_part(part_a);
  check_part(part_b);
  if (part_a == part_b)
    throw Error(ErrorCode::ShapeMismatch, "pair_stats needs distinct parts");
  PairStats st;
  st.min_degree_ab = std::numeric_limits<std::size_t>::max();
  st.min_degree_ba = std::numeric_limits<std::size_t>::max();
  for (int v = 0; v < n_; ++v) {
    std::size_t d = degree({part_a, v}, part_b);
    st.edges += d;
    st.min_degree_ab = std::min(st.min_degree_ab, d);
    st.min_degree_ba = std::min(st.min_degree_ba, degree({part_b, v}, part_a));
  }
  st.density = static_cast<double>(st.edges) /
               (static_cast<double>(n_) * static_cast<double>(n_));
  return st;
}

PartiteGraph PartiteGraph::induced(
    const std::vector<std::vector<std::uint32_t>>& keep) const {
  if (static_cast<int>(keep.size()) != r_)
    throw Error(ErrorCode::ShapeMismatch, "need one keep-set per part");
  const std::size_t m = keep.empty() ? 0 : keep[0].size();
  for (const auto& part : keep)
    if (part.size() != m)
      throw Error(ErrorCode::ShapeMismatch, "keep-sets must have equal sizes");
  if (m == 0) throw Error(ErrorCode::ShapeMismatch, "keep-sets are empty");
  for (const auto& part : keep)
    for (std::uint32_t idx : part)
      if (idx >= static_cast<std::uint32_t>(n_))
        throw Error(ErrorCode::IndexOutOfRange, "keep index " + std::to_string(idx));

  std::vector<std::pair<VertexRef, VertexRef>> edges;
  for (int i = 0; i < r_; ++i)
    for (int j = i + 1; j < r_; ++j)
      for (std::size_t a = 0; a < m; ++a) {
        const Bitset& nb = neighbors({i, static_cast<int>(keep[i][a])}, j);
        for (std::size_t b = 0; b < m; ++b)
          if (nb.test(keep[j][b]))
            edges.emplace_back(VertexRef{i, static_cast<int>(a)},
                               VertexRef{j, static_cast<int>(b)});
      }
  return PartiteGraph(r_, static_cast<int>(m), edges);
}

bool PartiteGraph::operator==(const PartiteGraph& other) const {
  return r_ == other.r_ && n_ == other.n_ && adj_ == other.adj_;
}

std::string PartiteGraph::serialize() const {
  std::ostringstream out;
  out << "r=" << r_ << " n=" << n_ << "\n";
  // Emit each edge once from the lower part; vid order is lexicographic in
  // (part, index, part, index), matching the bit-exact format contract.
  for (int i = 0; i < r_; ++i)
    for (int v = 0; v < n_; ++v)
      for (int j = i + 1; j < r_; ++j)
        neighbors({i, v}, j).for_each([&](std::size_t u) {
          out << (i + 1) << ":" << (v + 1) << " " << (j + 1) << ":" << (u + 1)
              << "\n";
        });
  return out.str();
}

namespace {

int parse_int(std::string_view token, int line_no) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.begin(), token.end(), value);
  if (ec != std::errc() || ptr != token.end())
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line_no) + ": bad integer '" +
                    std::string(token) + "'");
  return value;
}

VertexRef parse_vertex(std::string_view token, int line_no) {
  auto colon = token.find(':');
  if (colon == std::string_view::npos)
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line_no) + ": expected part:index, got '" +
                    std::string(token) + "'");
  int part = parse_int(token.substr(0, colon), line_no);
  int index = parse_int(token.substr(colon + 1), line_no);
  return {part - 1, index - 1};
}

}  // namespace

PartiteGraph PartiteGraph::deserialize(std::string_view text) {
  int r = -1, n = -1;
  std::vector<std::pair<VertexRef, VertexRef>> edges;
  int line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos
                                                 ? text.size() - pos
                                                 : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    // strip comment and whitespace
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
      line.remove_prefix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' ||
                             line.back() == '\r'))
      line.remove_suffix(1);
    if (line.empty()) continue;

    std::istringstream words{std::string(line)};
    std::string a, b, extra;
    words >> a >> b;
    if (words >> extra)
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": trailing token '" +
                      extra + "'");
    if (!header_seen) {
      if (a.rfind("r=", 0) != 0 || b.rfind("n=", 0) != 0)
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line_no) +
                        ": expected header 'r=<int> n=<int>'");
      r = parse_int(std::string_view(a).substr(2), line_no);
      n = parse_int(std::string_view(b).substr(2), line_no);
      header_seen = true;
      continue;
    }
    if (b.empty())
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": expected two vertices");
    VertexRef u = parse_vertex(a, line_no);
    VertexRef v = parse_vertex(b, line_no);
    if (u.part < 0 || u.part >= r || v.part < 0 || v.part >= r || u.index < 0 ||
        u.index >= n || v.index < 0 || v.index >= n)
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": vertex out of range");
    if (u.part == v.part)
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": intra-part edge");
    edges.emplace_back(u, v);
  }
  if (!header_seen)
    throw Error(ErrorCode::ParseError, "line 1: missing header");
  return PartiteGraph(r, n, edges);
}

PartiteGraph build_graph(
    int r, int n, std::span<const std::pair<VertexRef, VertexRef>> edges) {
  return PartiteGraph(r, n, edges);
}

PartiteGraph graph_union(const PartiteGraph& g, const PartiteGraph& h) {
  if (g.r_ != h.r_ || g.n_ != h.n_)
    throw Error(ErrorCode::ShapeMismatch,
                "union of graphs with different r or n");
  PartiteGraph out = g;
  out.edge_count_ = 0;
  for (std::size_t i = 0; i < out.adj_.size(); ++i) out.adj_[i] |= h.adj_[i];
  // recount once; rows store each edge twice
  std::size_t bits = 0;
  for (const Bitset& row : out.adj_) bits += row.count();
  out.edge_count_ = bits / 2;
  return out;
}

}  // namespace tilinglab
