#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "salza/bytes.hpp"

namespace salza {

/// Monotone weighting of symbol lengths into [0, 1].
///
/// Threshold and sigmoid functions are parameterized by a cutoff l0. A
/// function built without a cutoff is "auto": estimators bind it to the
/// meaningful-reference cutoff of whatever context they factorize against.
/// Custom functions are step tables: value(l) is the entry for the largest
/// tabulated length <= l, and 0 below the first entry.
class AdmissibleFunction {
 public:
  enum class Kind { Threshold, Sigmoid, Custom };

  struct TableEntry {
    std::size_t length;
    double value;
  };

  static AdmissibleFunction threshold() { return AdmissibleFunction(Kind::Threshold, std::nullopt); }
  static AdmissibleFunction threshold(double cutoff) { return AdmissibleFunction(Kind::Threshold, checked(cutoff)); }
  static AdmissibleFunction sigmoid() { return AdmissibleFunction(Kind::Sigmoid, std::nullopt); }
  static AdmissibleFunction sigmoid(double cutoff) { return AdmissibleFunction(Kind::Sigmoid, checked(cutoff)); }

  /// Entries must have strictly increasing lengths and non-decreasing values in [0, 1].
  static AdmissibleFunction table(std::vector<TableEntry> entries) {
    double prevValue = 0.0;
    std::size_t prevLength = 0;
    for (const auto& e : entries) {
      if (e.length == 0 || e.length <= prevLength) throw Error("custom table lengths must increase from 1");
      if (!(e.value >= prevValue) || e.value > 1.0) throw Error("custom table is not admissible");
      prevLength = e.length;
      prevValue = e.value;
    }
    AdmissibleFunction f(Kind::Custom, 0.0);
    f.table_ = std::make_shared<const std::vector<TableEntry>>(std::move(entries));
    return f;
  }

  Kind kind() const { return kind_; }
  bool needsCutoff() const { return !cutoff_.has_value(); }
  std::optional<double> cutoff() const { return cutoff_; }

  /// Returns this function with its cutoff fixed, unless it already has one.
  AdmissibleFunction bound(double cutoff) const {
    if (cutoff_) return *this;
    AdmissibleFunction f = *this;
    f.cutoff_ = checked(cutoff);
    return f;
  }

  double operator()(std::size_t length) const {
    if (!cutoff_) throw Error("admissible function has no cutoff");
    const auto l = static_cast<double>(length);
    switch (kind_) {
      case Kind::Threshold:
        return l > *cutoff_ ? 1.0 : 0.0;
      case Kind::Sigmoid:
        return 1.0 / (1.0 + std::exp(-l + *cutoff_));
      case Kind::Custom: {
        double v = 0.0;
        for (const auto& e : *table_) {
          if (e.length > length) break;
          v = e.value;
        }
        return v;
      }
    }
    return 0.0;
  }

 private:
  AdmissibleFunction(Kind kind, std::optional<double> cutoff) : kind_(kind), cutoff_(cutoff) {}

  static double checked(double cutoff) {
    if (!(cutoff >= 0.0) || !std::isfinite(cutoff)) throw Error("cutoff must be a finite nonnegative real");
    return cutoff;
  }

  Kind kind_;
  std::optional<double> cutoff_;
  std::shared_ptr<const std::vector<TableEntry>> table_;
};

}  // namespace salza
