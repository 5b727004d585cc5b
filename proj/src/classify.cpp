#include "chiraltop/classify.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "chiraltop/error.hpp"

namespace chiraltop {

namespace {

std::string superscript(int n) {
  static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
  std::string s;
  for (char c : std::to_string(n)) s += digits[c - '0'];
  return s;
}

std::string class_of(const std::string& label) { return label.substr(0, label.find('[')); }

AbelianGroup free_group(int rank) { return AbelianGroup{rank, {}, {}}; }
AbelianGroup cyclic(long order) { return order <= 1 ? AbelianGroup{} : AbelianGroup{0, {order}, {}}; }

long factorial(int m) {
  long f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

// Homotopy of U(m) outside the stable range 2m > k and off the diagonal k = 2m,
// for k <= 10 and m <= 6. Entries list the torsion orders; empty means trivial.
const std::map<std::pair<int, int>, std::vector<long>>& unstable_table() {
  static const std::map<std::pair<int, int>, std::vector<long>> table{
      // U(1) is a circle: nothing above degree 1.
      {{1, 3}, {}}, {{1, 4}, {}}, {{1, 5}, {}}, {{1, 6}, {}}, {{1, 7}, {}}, {{1, 8}, {}}, {{1, 9}, {}}, {{1, 10}, {}},
      // U(2) ~ S^1 x S^3.
      {{2, 5}, {2}}, {{2, 6}, {12}}, {{2, 7}, {2}}, {{2, 8}, {2}}, {{2, 9}, {3}}, {{2, 10}, {15}},
      {{3, 7}, {}}, {{3, 8}, {12}}, {{3, 9}, {3}}, {{3, 10}, {30}},
      {{4, 9}, {2}}, {{4, 10}, {2, 120}},
  };
  return table;
}

AbelianGroup labeled(AbelianGroup g, std::vector<std::string> labels) {
  g.labels = std::move(labels);
  return g;
}

std::vector<std::string> axis_labels(const std::string& cls, int d, int k) {
  std::vector<std::string> out;
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    std::string s = cls + "[";
    for (int a : pick) s += std::to_string(a + 1);
    out.push_back(s + "]");
    int i = k - 1;
    while (i >= 0 && pick[i] == d - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

}  // namespace

std::vector<long> invariant_factors(const std::vector<long>& torsion) {
  std::map<long, std::vector<long>> powers;  // prime -> prime powers
  for (long t : torsion) {
    long n = t;
    for (long p = 2; p * p <= n; ++p) {
      if (n % p) continue;
      long q = 1;
      while (n % p == 0) {
        n /= p;
        q *= p;
      }
      powers[p].push_back(q);
    }
    if (n > 1) powers[n].push_back(n);
  }
  std::size_t count = 0;
  for (auto& [p, list] : powers) {
    std::sort(list.rbegin(), list.rend());
    count = std::max(count, list.size());
  }
  // The largest factor collects the largest power of every prime, and so on.
  std::vector<long> factors(count, 1);
  for (const auto& [p, list] : powers)
    for (std::size_t i = 0; i < list.size(); ++i) factors[count - 1 - i] *= list[i];
  return factors;
}

bool AbelianGroup::operator==(const AbelianGroup& other) const {
  return free_rank == other.free_rank && invariant_factors(torsion) == invariant_factors(other.torsion);
}

std::string AbelianGroup::to_string() const {
  if (free_rank == 0 && torsion.empty()) return "0";
  std::vector<std::string> blocks, names;
  if (static_cast<int>(labels.size()) == free_rank + static_cast<int>(torsion.size())) {
    int i = 0;
    while (i < free_rank) {
      int j = i;
      while (j < free_rank && class_of(labels[j]) == class_of(labels[i])) ++j;
      const int n = j - i;
      blocks.push_back(n == 1 ? "Z" : "Z" + superscript(n));
      names.push_back(n == 1 ? class_of(labels[i]) : class_of(labels[i]) + "×" + std::to_string(n));
      i = j;
    }
    for (std::size_t t = 0; t < torsion.size(); ++t) {
      blocks.push_back("Z/" + std::to_string(torsion[t]));
      names.push_back(class_of(labels[free_rank + t]));
    }
  } else {
    if (free_rank > 0) blocks.push_back(free_rank == 1 ? "Z" : "Z" + superscript(free_rank));
    for (long t : torsion) blocks.push_back("Z/" + std::to_string(t));
  }
  std::string s;
  for (std::size_t i = 0; i < blocks.size(); ++i) s += (i ? " ⊕ " : "") + blocks[i];
  if (!names.empty()) {
    s += " [";
    for (std::size_t i = 0; i < names.size(); ++i) s += (i ? ", " : "") + names[i];
    s += "]";
  }
  return s;
}

AbelianGroup direct_sum(const AbelianGroup& a, const AbelianGroup& b) {
  AbelianGroup g;
  g.free_rank = a.free_rank + b.free_rank;
  std::vector<std::pair<long, std::string>> tors;
  const bool keep_labels = a.labels.size() == a.free_rank + a.torsion.size() &&
                           b.labels.size() == b.free_rank + b.torsion.size() && !(a.labels.empty() && b.labels.empty());
  for (std::size_t i = 0; i < a.torsion.size(); ++i)
    tors.emplace_back(a.torsion[i], keep_labels ? a.labels[a.free_rank + i] : "");
  for (std::size_t i = 0; i < b.torsion.size(); ++i)
    tors.emplace_back(b.torsion[i], keep_labels ? b.labels[b.free_rank + i] : "");
  std::stable_sort(tors.begin(), tors.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (const auto& t : tors) g.torsion.push_back(t.first);
  if (keep_labels) {
    g.labels.insert(g.labels.end(), a.labels.begin(), a.labels.begin() + a.free_rank);
    g.labels.insert(g.labels.end(), b.labels.begin(), b.labels.begin() + b.free_rank);
    for (const auto& t : tors) g.labels.push_back(t.second);
  }
  return g;
}

AbelianGroup pi_unitary(std::optional<int> rank, int k) {
  if (k < 0) throw Error(ErrorKind::OutsideTabulatedRange, "homotopy degree must be non-negative");
  if (k == 0) return AbelianGroup{};
  if (!rank) return k % 2 ? free_group(1) : AbelianGroup{};
  const int m = *rank;
  if (m < 1) throw Error(ErrorKind::BadParams, "rank must be at least 1");
  if (2 * m > k) return k % 2 ? free_group(1) : AbelianGroup{};
  if (2 * m == k) return cyclic(factorial(m));
  const auto& table = unstable_table();
  const auto it = table.find({m, k});
  if (it == table.end())
    throw Error(ErrorKind::OutsideTabulatedRange,
                "pi_" + std::to_string(k) + "(U(" + std::to_string(m) + ")) is outside the tabulated range");
  AbelianGroup g;
  g.torsion = it->second;
  return g;
}

AbelianGroup pi_classifying(std::optional<int> rank, int k) {
  if (k < 0) throw Error(ErrorKind::OutsideTabulatedRange, "homotopy degree must be non-negative");
  if (k == 0) return AbelianGroup{};
  return direct_sum(pi_unitary(rank, k), pi_unitary(rank, k - 1));
}

AbelianGroup classify_space(SpaceKind kind, int d, int rank) {
  if (rank < 1) throw Error(ErrorKind::BadParams, "rank must be at least 1");
  if (d < 1 || d > 4)
    throw Error(ErrorKind::OutsideProvedRange, "classification is available for dimensions 1 to 4 only");
  if (kind == SpaceKind::sphere) {
    // pi_d(U(m)) carries the odd class (or the torsion label), pi_(d-1)(U(m)) the Chern class.
    const AbelianGroup odd = pi_unitary(rank, d);
    const AbelianGroup even = pi_unitary(rank, d - 1);
    std::vector<std::string> odd_labels, even_labels;
    for (int i = 0; i < odd.free_rank; ++i) odd_labels.push_back("w" + std::to_string((d + 1) / 2));
    for (std::size_t i = 0; i < odd.torsion.size(); ++i) odd_labels.push_back("z2");
    for (int i = 0; i < even.free_rank; ++i) even_labels.push_back("c" + std::to_string(d / 2));
    const auto a = labeled(odd, odd_labels);
    const auto b = labeled(even, even_labels);
    // Free generators follow the order w1, c1, w2, c2.
    return d % 2 ? direct_sum(a, b) : direct_sum(b, a);
  }
  if (kind != SpaceKind::torus) throw Error(ErrorKind::OutsideProvedRange, "only spheres and tori are classified");
  AbelianGroup g;
  auto add = [&](const std::string& cls, int k) {
    for (const auto& l : axis_labels(cls, d, k)) {
      g.labels.push_back(l);
      ++g.free_rank;
    }
  };
  add("w1", 1);
  if (d >= 2) add("c1", 2);
  if (rank >= 2 && d >= 3) add("w2", 3);
  if (rank >= 2 && d == 4) {
    add("c2", 4);
    if (rank == 2) {
      g.torsion.push_back(2);
      g.labels.push_back("z2");
    }
  }
  return g;
}

ClassLabel match_report(const InvariantReport& report, SpaceKind kind, int d, int rank) {
  if (report.grid.kind() != kind || report.grid.dim() != d)
    throw Error(ErrorKind::DimensionMismatch, "report base " + report.grid.describe() + " does not match the requested space");
  const AbelianGroup g = classify_space(kind, d, rank);
  ClassLabel out;
  std::vector<std::string> missing;
  for (int i = 0; i < g.free_rank; ++i) {
    const std::string& label = g.labels[i];
    const std::string cls = class_of(label);
    const std::string cycle = label.find('[') == std::string::npos ? "S" : label.substr(cls.size() + 1, label.size() - cls.size() - 2);
    const auto it = report.classes.find(cls);
    bool found = false;
    if (it != report.classes.end()) {
      for (const auto& e : it->second) {
        if (e.cycle != cycle) continue;
        if (e.value && e.value->resolved) {
          out.values.push_back(e.value->value);
          found = true;
        }
        break;
      }
    }
    if (!found) missing.push_back(label);
  }
  const bool needs_z2 = std::find(g.labels.begin(), g.labels.end(), "z2") != g.labels.end();
  if (needs_z2) {
    if (report.z2) out.z2 = *report.z2;
    else missing.push_back("z2 (no extension supplied)");
  }
  if (!missing.empty()) {
    std::string s = "missing or unresolved generators:";
    for (const auto& m : missing) s += " " + m;
    throw Error(ErrorKind::IncompleteReport, s);
  }
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < g.free_rank; ++i) {
    if (i > 0) os << (class_of(g.labels[i]) == class_of(g.labels[i - 1]) ? "," : "; ");
    os << out.values[i];
  }
  os << ')';
  if (out.z2) os << " z2=" << (*out.z2 > 0 ? "+1" : "-1");
  out.text = os.str();
  return out;
}

}  // namespace chiraltop
