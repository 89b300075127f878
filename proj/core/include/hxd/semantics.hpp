// Finite hybrid data models and the satisfaction relation.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hxd/syntax.hpp"

namespace hxd {

struct Sequent;

// Carrier is 0..n_nodes-1 with n_nodes <= 64; node sets are bitmasks.
using NodeSet = std::uint64_t;
constexpr int kMaxNodes = 64;

struct HybridDataModel {
  int n_nodes = 1;
  std::map<Ident, std::vector<NodeSet>> rel;  // successor set per node
  std::map<Ident, std::vector<int>> cmp;      // block index per node
  std::map<Ident, int> assign;
  std::map<Ident, NodeSet> val;

  NodeSet all() const {
    return n_nodes >= 64 ? ~NodeSet{0} : ((NodeSet{1} << n_nodes) - 1);
  }
  bool has_edge(Ident const& a, int from, int to) const;
  void add_edge(Ident const& a, int from, int to);
  bool operator==(const HybridDataModel&) const = default;
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Set of points satisfying e.
NodeSet eval_set(const HybridDataModel& m, const NodeP& e);
// Image of each point under a path: result[n] = { n' | (n, n') in [[a]] }.
std::vector<NodeSet> eval_path_rel(const HybridDataModel& m, const PathP& a);

bool eval_node(const HybridDataModel& m, int n, const NodeP& e);
bool eval_path(const HybridDataModel& m, int n, int n2, const PathP& a);
bool diamond_check(const HybridDataModel& m, int n, const PathP& a, const NodeP& e);

bool sequent_valid_in(const HybridDataModel& m, const Sequent& s);

class ModelEnumerator {
 public:
  ModelEnumerator(Signature sig, int max_n);
  // Fills m with the next model; false once exhausted.
  bool next(HybridDataModel& m);

 private:
  void start_size(int n);
  void build(HybridDataModel& m) const;

  Signature sig_;
  std::vector<Ident> mods_, cmps_, noms_, props_;
  int max_n_;
  int n_ = 0;
  std::vector<std::vector<int>> partitions_;  // restricted growth strings for n_
  std::vector<std::uint64_t> radix_, digit_;
  bool started_ = false;
};

std::vector<HybridDataModel> enumerate_models(const Signature& sig, int max_n);
// Visits models in enumeration order until f returns false.
void for_each_model(const Signature& sig, int max_n,
                    const std::function<bool(const HybridDataModel&)>& f);
std::uint64_t count_models(const Signature& sig, int max_n);

std::optional<HybridDataModel> find_countermodel(const Sequent& s, int max_n);

std::string print_model(const HybridDataModel& m);
HybridDataModel parse_model(const std::string& text);

}  // namespace hxd
