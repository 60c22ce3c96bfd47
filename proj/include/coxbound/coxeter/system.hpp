#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "coxbound/errors.hpp"

namespace coxbound {

using Gen = std::uint8_t;

// Sentinel for m_ij = infinity (no relation between s_i and s_j).
inline constexpr int kInfinity = 0;

// Bitmask over generator indices; rank is capped at 32.
using TypeSet = std::uint32_t;

inline constexpr int kMaxRank = 32;

class CoxeterSystem {
 public:
  CoxeterSystem() = default;

  CoxeterSystem(std::vector<std::string> labels, std::vector<std::vector<int>> orders)
      : labels_(std::move(labels)), orders_(std::move(orders)) {
    validate();
  }

  int rank() const noexcept { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(Gen s) const { return labels_.at(s); }

  // m_st; kInfinity when the product st has infinite order.
  int order(Gen s, Gen t) const { return orders_[s][t]; }
  const std::vector<std::vector<int>>& orders() const noexcept { return orders_; }

  bool commute(Gen s, Gen t) const { return s == t || orders_[s][t] == 2; }

  bool is_right_angled() const {
    for (int i = 0; i < rank(); ++i)
      for (int j = i + 1; j < rank(); ++j)
        if (orders_[i][j] != 2 && orders_[i][j] != kInfinity) return false;
    return true;
  }

  Gen index_of(const std::string& label) const {
    for (int i = 0; i < rank(); ++i)
      if (labels_[i] == label) return static_cast<Gen>(i);
    throw InputError("unknown generator label '" + label + "'");
  }

  TypeSet all_generators() const {
    return rank() == kMaxRank ? ~TypeSet{0} : ((TypeSet{1} << rank()) - 1);
  }

  // Restriction to the generators in J, relabelled 0..|J|-1 in increasing order.
  CoxeterSystem restrict_to(TypeSet J) const {
    std::vector<int> keep;
    for (int i = 0; i < rank(); ++i)
      if (J & (TypeSet{1} << i)) keep.push_back(i);
    std::vector<std::string> labels;
    std::vector<std::vector<int>> orders(keep.size(), std::vector<int>(keep.size()));
    for (std::size_t a = 0; a < keep.size(); ++a) {
      labels.push_back(labels_[keep[a]]);
      for (std::size_t b = 0; b < keep.size(); ++b) orders[a][b] = orders_[keep[a]][keep[b]];
    }
    return CoxeterSystem(std::move(labels), std::move(orders));
  }

  // Direct product: generators of `other` follow ours and commute with them.
  CoxeterSystem product(const CoxeterSystem& other) const {
    const int n = rank(), m = other.rank();
    std::vector<std::string> labels = labels_;
    labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
    std::vector<std::vector<int>> orders(n + m, std::vector<int>(n + m, 2));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) orders[i][j] = orders_[i][j];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) orders[n + i][n + j] = other.orders_[i][j];
    return CoxeterSystem(std::move(labels), std::move(orders));
  }

  friend bool operator==(const CoxeterSystem&, const CoxeterSystem&) = default;

 private:
  void validate() const {
    const std::size_t n = labels_.size();
    if (n == 0) throw InputError("Coxeter system needs at least one generator");
    if (n > static_cast<std::size_t>(kMaxRank)) throw InputError("rank above 32 is not supported");
    if (orders_.size() != n) throw InputError("Coxeter matrix has wrong number of rows");
    for (std::size_t i = 0; i < n; ++i) {
      if (orders_[i].size() != n) throw InputError("Coxeter matrix row has wrong length");
      if (orders_[i][i] != 1) throw InputError("Coxeter matrix diagonal must be 1");
      for (std::size_t j = 0; j < n; ++j) {
        if (orders_[i][j] != orders_[j][i]) throw InputError("Coxeter matrix must be symmetric");
        if (i != j && orders_[i][j] != kInfinity && orders_[i][j] < 2)
          throw InputError("off-diagonal Coxeter entries must be >= 2 or inf");
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (labels_[i] == labels_[j]) throw InputError("duplicate generator label " + labels_[i]);
  }

  std::vector<std::string> labels_;
  std::vector<std::vector<int>> orders_;
};

// {"labels": [...], "orders": [[1, 3], [3, 1]]} with "inf" for infinite entries.
inline CoxeterSystem coxeter_from_json(const nlohmann::json& j) {
  try {
    auto labels = j.at("labels").get<std::vector<std::string>>();
    std::vector<std::vector<int>> orders;
    for (const auto& row : j.at("orders")) {
      std::vector<int> r;
      for (const auto& e : row) {
        if (e.is_string()) {
          if (e.get<std::string>() != "inf") throw InputError("Coxeter entry must be a number or \"inf\"");
          r.push_back(kInfinity);
        } else {
          r.push_back(e.get<int>());
        }
      }
      orders.push_back(std::move(r));
    }
    return CoxeterSystem(std::move(labels), std::move(orders));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad Coxeter system: ") + e.what());
  }
}

inline nlohmann::json to_json(const CoxeterSystem& sys) {
  nlohmann::json orders = nlohmann::json::array();
  for (int i = 0; i < sys.rank(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < sys.rank(); ++j) {
      const int m = sys.order(static_cast<Gen>(i), static_cast<Gen>(j));
      if (m == kInfinity)
        row.push_back("inf");
      else
        row.push_back(m);
    }
    orders.push_back(std::move(row));
  }
  return {{"labels", sys.labels()}, {"orders", orders}};
}

// Dihedral system of order 2m (m = kInfinity gives D_infinity).
inline CoxeterSystem dihedral(int m, std::string s = "s", std::string t = "t") {
  return CoxeterSystem({std::move(s), std::move(t)}, {{1, m}, {m, 1}});
}

// Free Coxeter group (Z/2)^{*r}; its Coxeter complex is the r-regular tree.
inline CoxeterSystem free_coxeter(int r) {
  std::vector<std::string> labels;
  std::vector<std::vector<int>> orders(r, std::vector<int>(r, kInfinity));
  for (int i = 0; i < r; ++i) {
    labels.push_back(std::string(1, static_cast<char>('a' + i)));
    orders[i][i] = 1;
  }
  return CoxeterSystem(std::move(labels), std::move(orders));
}

// Right-angled system whose commutation graph is the n-cycle (n=5: pentagon).
inline CoxeterSystem polygon_racg(int n) {
  std::vector<std::string> labels;
  std::vector<std::vector<int>> orders(n, std::vector<int>(n, kInfinity));
  for (int i = 0; i < n; ++i) {
    labels.push_back("s" + std::to_string(i + 1));
    orders[i][i] = 1;
    orders[i][(i + 1) % n] = 2;
    orders[(i + 1) % n][i] = 2;
  }
  return CoxeterSystem(std::move(labels), std::move(orders));
}

}  // namespace coxbound
