#include "hxd/semantics.hpp"

#include <bit>
#include <sstream>

#include "hxd/kernel.hpp"

namespace hxd {

bool HybridDataModel::has_edge(const Ident& a, int from, int to) const {
  auto it = rel.find(a);
  return it != rel.end() && ((it->second[from] >> to) & 1);
}

void HybridDataModel::add_edge(const Ident& a, int from, int to) {
  auto& succ = rel[a];
  succ.resize(n_nodes, 0);
  succ[from] |= NodeSet{1} << to;
}

namespace {

int point_of(const HybridDataModel& m, const Ident& i) {
  auto it = m.assign.find(i);
  if (it == m.assign.end()) throw EvalError("undeclared nominal '" + i + "'");
  return it->second;
}

const std::vector<int>& blocks_of(const HybridDataModel& m, const Ident& c) {
  auto it = m.cmp.find(c);
  if (it == m.cmp.end()) throw EvalError("undeclared comparison sort '" + c + "'");
  return it->second;
}

// Bitmask of the blocks hit by a node set.
std::uint64_t blocks_hit(const std::vector<int>& blocks, NodeSet s) {
  std::uint64_t hit = 0;
  while (s) {
    int x = std::countr_zero(s);
    s &= s - 1;
    hit |= std::uint64_t{1} << blocks[x];
  }
  return hit;
}

}  // namespace

std::vector<NodeSet> eval_path_rel(const HybridDataModel& m, const PathP& a) {
  int n = m.n_nodes;
  std::vector<NodeSet> out(n, 0);
  switch (a->kind) {
    case PathKind::Step: {
      auto it = m.rel.find(a->name);
      if (it == m.rel.end()) throw EvalError("undeclared modality '" + a->name + "'");
      return it->second;
    }
    case PathKind::Goto: {
      NodeSet target = NodeSet{1} << point_of(m, a->name);
      for (auto& x : out) x = target;
      return out;
    }
    case PathKind::Test: {
      NodeSet s = eval_set(m, a->cond);
      for (int x = 0; x < n; ++x)
        if ((s >> x) & 1) out[x] = NodeSet{1} << x;
      return out;
    }
    case PathKind::Comp: {
      auto r1 = eval_path_rel(m, a->left);
      auto r2 = eval_path_rel(m, a->right);
      for (int x = 0; x < n; ++x) {
        NodeSet mid = r1[x];
        while (mid) {
          int y = std::countr_zero(mid);
          mid &= mid - 1;
          out[x] |= r2[y];
        }
      }
      return out;
    }
  }
  return out;
}

NodeSet eval_set(const HybridDataModel& m, const NodeP& e) {
  const NodeSet all = m.all();
  switch (e->kind) {
    case NodeKind::Prop: {
      auto it = m.val.find(e->name);
      if (it == m.val.end()) throw EvalError("undeclared proposition '" + e->name + "'");
      return it->second & all;
    }
    case NodeKind::Nom: return NodeSet{1} << point_of(m, e->name);
    case NodeKind::Bot: return 0;
    case NodeKind::Imp: return (~eval_set(m, e->a) | eval_set(m, e->b)) & all;
    case NodeKind::At: {
      NodeSet s = eval_set(m, e->b);
      return ((s >> point_of(m, e->name)) & 1) ? all : 0;
    }
    case NodeKind::Dia: {
      auto it = m.rel.find(e->name);
      if (it == m.rel.end()) throw EvalError("undeclared modality '" + e->name + "'");
      NodeSet body = eval_set(m, e->b), out = 0;
      for (int x = 0; x < m.n_nodes; ++x)
        if (it->second[x] & body) out |= NodeSet{1} << x;
      return out;
    }
    case NodeKind::Cmp: {
      const auto& blocks = blocks_of(m, e->name);
      auto r1 = eval_path_rel(m, e->left);
      auto r2 = eval_path_rel(m, e->right);
      NodeSet out = 0;
      for (int x = 0; x < m.n_nodes; ++x) {
        std::uint64_t b1 = blocks_hit(blocks, r1[x]), b2 = blocks_hit(blocks, r2[x]);
        bool holds;
        if (e->pol == CmpPolarity::Eq) holds = (b1 & b2) != 0;
        else holds = b1 && b2 && !(b1 == b2 && std::popcount(b1) == 1);
        if (holds) out |= NodeSet{1} << x;
      }
      return out;
    }
  }
  return 0;
}

bool eval_node(const HybridDataModel& m, int n, const NodeP& e) {
  return (eval_set(m, e) >> n) & 1;
}

bool eval_path(const HybridDataModel& m, int n, int n2, const PathP& a) {
  return (eval_path_rel(m, a)[n] >> n2) & 1;
}

bool diamond_check(const HybridDataModel& m, int n, const PathP& a, const NodeP& e) {
  return (eval_path_rel(m, a)[n] & eval_set(m, e)) != 0;
}

namespace {

bool holds(const HybridDataModel& m, const LabeledExpr& f) {
  if (f.is_sat()) return (eval_set(m, f.body) >> point_of(m, f.i)) & 1;
  const auto& blocks = blocks_of(m, f.sort);
  bool same = blocks[point_of(m, f.i)] == blocks[point_of(m, f.j)];
  return f.pol == CmpPolarity::Eq ? same : !same;
}

}  // namespace

bool sequent_valid_in(const HybridDataModel& m, const Sequent& s) {
  for (const auto& f : s.ante)
    if (!holds(m, f)) return true;
  for (const auto& f : s.cons)
    if (holds(m, f)) return true;
  return false;
}

// enumeration

ModelEnumerator::ModelEnumerator(Signature sig, int max_n)
    : sig_(std::move(sig)), max_n_(max_n) {
  mods_.assign(sig_.mods.begin(), sig_.mods.end());
  cmps_.assign(sig_.cmps.begin(), sig_.cmps.end());
  noms_.assign(sig_.noms.begin(), sig_.noms.end());
  props_.assign(sig_.props.begin(), sig_.props.end());
}

void ModelEnumerator::start_size(int n) {
  if (n * n >= 64) throw std::invalid_argument("model enumeration beyond 7 nodes");
  n_ = n;
  partitions_.clear();
  std::vector<int> rgs(n, 0);
  // restricted growth strings in lexicographic order
  for (;;) {
    partitions_.push_back(rgs);
    int k = n - 1;
    for (; k > 0; --k) {
      int mx = 0;
      for (int q = 0; q < k; ++q) mx = std::max(mx, rgs[q]);
      if (rgs[k] <= mx) {
        ++rgs[k];
        for (int q = k + 1; q < n; ++q) rgs[q] = 0;
        break;
      }
    }
    if (k == 0) break;
  }
  radix_.clear();
  for (std::size_t q = 0; q < mods_.size(); ++q) radix_.push_back(std::uint64_t{1} << (n * n));
  for (std::size_t q = 0; q < cmps_.size(); ++q) radix_.push_back(partitions_.size());
  for (std::size_t q = 0; q < noms_.size(); ++q) radix_.push_back(n);
  for (std::size_t q = 0; q < props_.size(); ++q) radix_.push_back(std::uint64_t{1} << n);
  digit_.assign(radix_.size(), 0);
}

void ModelEnumerator::build(HybridDataModel& m) const {
  int n = n_;
  m = HybridDataModel{};
  m.n_nodes = n;
  std::size_t d = 0;
  for (const auto& a : mods_) {
    std::vector<NodeSet> succ(n, 0);
    std::uint64_t bits = digit_[d++];
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if ((bits >> (x * n + y)) & 1) succ[x] |= NodeSet{1} << y;
    m.rel[a] = std::move(succ);
  }
  for (const auto& c : cmps_) m.cmp[c] = partitions_[digit_[d++]];
  for (const auto& i : noms_) m.assign[i] = int(digit_[d++]);
  for (const auto& p : props_) m.val[p] = digit_[d++];
}

bool ModelEnumerator::next(HybridDataModel& m) {
  if (!started_) {
    started_ = true;
    if (max_n_ < 1) return false;
    start_size(1);
    build(m);
    return true;
  }
  for (std::size_t k = digit_.size(); k-- > 0;) {
    if (++digit_[k] < radix_[k]) {
      build(m);
      return true;
    }
    digit_[k] = 0;
  }
  if (n_ >= max_n_) return false;
  start_size(n_ + 1);
  build(m);
  return true;
}

std::vector<HybridDataModel> enumerate_models(const Signature& sig, int max_n) {
  std::vector<HybridDataModel> out;
  for_each_model(sig, max_n, [&](const HybridDataModel& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

void for_each_model(const Signature& sig, int max_n,
                    const std::function<bool(const HybridDataModel&)>& f) {
  ModelEnumerator en(sig, max_n);
  HybridDataModel m;
  while (en.next(m))
    if (!f(m)) return;
}

std::uint64_t count_models(const Signature& sig, int max_n) {
  std::uint64_t total = 0;
  for (int n = 1; n <= max_n; ++n) {
    std::uint64_t bell = 0;
    {
      // Bell numbers via the triangle
      std::vector<std::uint64_t> row{1};
      for (int k = 1; k < n; ++k) {
        std::vector<std::uint64_t> nx{row.back()};
        for (auto v : row) nx.push_back(nx.back() + v);
        row = nx;
      }
      bell = row.back();
    }
    std::uint64_t c = 1;
    for (std::size_t q = 0; q < sig.mods.size(); ++q) c *= std::uint64_t{1} << (n * n);
    for (std::size_t q = 0; q < sig.cmps.size(); ++q) c *= bell;
    for (std::size_t q = 0; q < sig.noms.size(); ++q) c *= n;
    for (std::size_t q = 0; q < sig.props.size(); ++q) c *= std::uint64_t{1} << n;
    total += c;
  }
  return total;
}

std::optional<HybridDataModel> find_countermodel(const Sequent& s, int max_n) {
  std::optional<HybridDataModel> found;
  for_each_model(signature_of(s), max_n, [&](const HybridDataModel& m) {
    if (sequent_valid_in(m, s)) return true;
    found = m;
    return false;
  });
  return found;
}

// text format

std::string print_model(const HybridDataModel& m) {
  std::ostringstream out;
  out << "nodes " << m.n_nodes << "\n";
  for (const auto& [a, succ] : m.rel) {
    out << "rel " << a << ":";
    for (int x = 0; x < m.n_nodes; ++x)
      for (int y = 0; y < m.n_nodes; ++y)
        if ((succ[x] >> y) & 1) out << " (" << x << "," << y << ")";
    out << "\n";
  }
  for (const auto& [c, blocks] : m.cmp) {
    out << "cmp " << c << ":";
    int nb = 0;
    for (int b : blocks) nb = std::max(nb, b + 1);
    out << (nb ? " " : "");
    for (int b = 0; b < nb; ++b) {
      out << "{";
      bool first = true;
      for (int x = 0; x < m.n_nodes; ++x)
        if (blocks[x] == b) {
          out << (first ? "" : ",") << x;
          first = false;
        }
      out << "}";
    }
    out << "\n";
  }
  for (const auto& [i, x] : m.assign) out << "nom " << i << " = " << x << "\n";
  for (const auto& [p, s] : m.val) {
    out << "val " << p << ":";
    for (int x = 0; x < m.n_nodes; ++x)
      if ((s >> x) & 1) out << " " << x;
    out << "\n";
  }
  return out.str();
}

namespace {

[[noreturn]] void model_error(int line, const std::string& msg) {
  throw ParseError(line, 1, msg);
}

}  // namespace

HybridDataModel parse_model(const std::string& text) {
  HybridDataModel m;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool have_nodes = false;
  auto point = [&](const std::string& tok) {
    std::size_t used = 0;
    int x = -1;
    try {
      x = std::stoi(tok, &used);
    } catch (...) {
    }
    if (used != tok.size() || x < 0 || (have_nodes && x >= m.n_nodes))
      model_error(line, "bad node index '" + tok + "'");
    return x;
  };
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
    std::istringstream ls(raw);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "nodes") {
      int n = 0;
      if (!(ls >> n) || n < 1 || n > kMaxNodes) model_error(line, "bad node count");
      m.n_nodes = n;
      have_nodes = true;
      continue;
    }
    if (!have_nodes) model_error(line, "'nodes N' must come first");
    std::string rest;
    std::getline(ls, rest);
    auto colon = rest.find(kw == "nom" ? '=' : ':');
    if (colon == std::string::npos) model_error(line, "missing separator");
    std::string name = rest.substr(0, colon);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    std::string body = rest.substr(colon + 1);
    if (name.empty()) model_error(line, "missing symbol");
    if (kw == "rel") {
      auto& succ = m.rel[name];
      succ.assign(m.n_nodes, 0);
      for (char& c : body)
        if (c == '(' || c == ')' || c == ',') c = ' ';
      std::istringstream ps(body);
      std::string a, b;
      while (ps >> a) {
        if (!(ps >> b)) model_error(line, "odd pair list");
        succ[point(a)] |= NodeSet{1} << point(b);
      }
    } else if (kw == "cmp") {
      std::vector<int> blocks(m.n_nodes, -1);
      int b = -1;
      std::string cur;
      auto flush = [&] {
        if (cur.empty()) return;
        int x = point(cur);
        if (blocks[x] != -1) model_error(line, "node in two blocks");
        blocks[x] = b;
        cur.clear();
      };
      for (char c : body) {
        if (c == '{') {
          ++b;
        } else if (c == '}' || c == ',' || c == ' ') {
          flush();
        } else {
          cur += c;
        }
      }
      flush();
      for (int x : blocks)
        if (x < 0) model_error(line, "partition does not cover the carrier");
      m.cmp[name] = blocks;
    } else if (kw == "nom") {
      std::istringstream ps(body);
      std::string a;
      if (!(ps >> a)) model_error(line, "missing node");
      m.assign[name] = point(a);
    } else if (kw == "val") {
      std::istringstream ps(body);
      std::string a;
      NodeSet s = 0;
      while (ps >> a) s |= NodeSet{1} << point(a);
      m.val[name] = s;
    } else {
      model_error(line, "unknown keyword '" + kw + "'");
    }
  }
  if (!have_nodes) model_error(line, "missing 'nodes N'");
  return m;
}

}  // namespace hxd
