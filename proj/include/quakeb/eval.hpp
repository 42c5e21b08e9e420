#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>

#include "quakeb/error.hpp"

namespace quakeb {

/// Decision threshold on the normalized network output. The default makes a
/// prediction count as an earthquake exactly when the denormalized predicted
/// magnitude reaches the completeness cutoff.
struct ThresholdPolicy {
  double tau = 0.375;

  static ThresholdPolicy for_cutoff(double cutoff_magnitude, double magnitude_scale = 8.0) {
    if (!(magnitude_scale > 0)) throw ValidationError("magnitude scale must be positive");
    return ThresholdPolicy{cutoff_magnitude / magnitude_scale};
  }
};

inline void validate(const ThresholdPolicy& policy) {
  if (!(policy.tau > 0 && policy.tau < 1))
    throw ValidationError("threshold must lie strictly between 0 and 1");
}

enum class Outcome { true_positive, true_negative, false_positive, false_negative };

/// Predicted positive iff yhat >= tau (the boundary counts as positive);
/// actually positive iff the target magnitude is nonzero.
inline Outcome classify(double yhat, double y, const ThresholdPolicy& policy) {
  validate(policy);
  const bool predicted = yhat >= policy.tau;
  const bool actual = y > 0;
  if (predicted) return actual ? Outcome::true_positive : Outcome::false_positive;
  return actual ? Outcome::false_negative : Outcome::true_negative;
}

struct ConfusionMatrix {
  std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;

  void tally(Outcome o) {
    switch (o) {
      case Outcome::true_positive: ++tp; break;
      case Outcome::true_negative: ++tn; break;
      case Outcome::false_positive: ++fp; break;
      case Outcome::false_negative: ++fn; break;
    }
  }

  std::uint64_t total() const { return tp + tn + fp + fn; }
};

inline ConfusionMatrix tabulate(std::span<const double> outputs, std::span<const double> targets,
                                const ThresholdPolicy& policy) {
  if (outputs.size() != targets.size())
    throw ValidationError("outputs and targets differ in length");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < outputs.size(); ++i)
    cm.tally(classify(outputs[i], targets[i], policy));
  return cm;
}

/// P0 and P1 are the negative and positive predictive values, Sn and Sp the
/// sensitivity and specificity. The average is reported in percent.
struct MetricsReport {
  double p0 = 0, p1 = 0, sn = 0, sp = 0;
  double average = 0;
};

namespace detail {

/// Empty denominators yield 0; a matrix with TP = 0 legitimately reports
/// P1 = Sn = 0 rather than failing.
inline double ratio_or_zero(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace detail

inline MetricsReport metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw ValidationError("empty evaluation: all confusion counts are zero");
  MetricsReport r;
  r.p0 = detail::ratio_or_zero(cm.tn, cm.tn + cm.fn);
  r.p1 = detail::ratio_or_zero(cm.tp, cm.tp + cm.fp);
  r.sn = detail::ratio_or_zero(cm.tp, cm.tp + cm.fn);
  r.sp = detail::ratio_or_zero(cm.tn, cm.tn + cm.fp);
  r.average = 100.0 * (r.p0 + r.p1 + r.sn + r.sp) / 4.0;
  return r;
}

/// 7 significant digits, the precision the report tables use for ratios.
inline std::string format_ratio(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.7g", v);
  return buf;
}

inline std::string format_percent(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// Three-column report: counts carry no percent, ratios carry percent to two
/// decimals, and the closing row is the four-metric average.
inline void render_report(const MetricsReport& report, const ConfusionMatrix& cm,
                          std::ostream& out) {
  const auto row = [&](const std::string& name, const std::string& value,
                       const std::string& percent) {
    out << name;
    for (std::size_t i = name.size(); i < 10; ++i) out << ' ';
    out << value;
    if (!percent.empty()) {
      for (std::size_t i = value.size(); i < 12; ++i) out << ' ';
      out << percent;
    }
    out << '\n';
  };
  row("Parameter", "Value", "Percent");
  row("TP", std::to_string(cm.tp), "");
  row("TN", std::to_string(cm.tn), "");
  row("FP", std::to_string(cm.fp), "");
  row("FN", std::to_string(cm.fn), "");
  row("P0", format_ratio(report.p0), format_percent(100.0 * report.p0));
  row("P1", format_ratio(report.p1), format_percent(100.0 * report.p1));
  row("Sn", format_ratio(report.sn), format_percent(100.0 * report.sn));
  row("Sp", format_ratio(report.sp), format_percent(100.0 * report.sp));
  row("Average", "", format_percent(report.average));
}

inline constexpr const char* kReportCsvHeader = "metric,value,percent";

inline void render_report_csv(const MetricsReport& report, const ConfusionMatrix& cm,
                              std::ostream& out) {
  out << kReportCsvHeader << '\n'
      << "TP," << cm.tp << ",\n"
      << "TN," << cm.tn << ",\n"
      << "FP," << cm.fp << ",\n"
      << "FN," << cm.fn << ",\n"
      << "P0," << format_ratio(report.p0) << ',' << format_percent(100.0 * report.p0) << '\n'
      << "P1," << format_ratio(report.p1) << ',' << format_percent(100.0 * report.p1) << '\n'
      << "Sn," << format_ratio(report.sn) << ',' << format_percent(100.0 * report.sn) << '\n'
      << "Sp," << format_ratio(report.sp) << ',' << format_percent(100.0 * report.sp) << '\n'
      << "Average,," << format_percent(report.average) << '\n';
}

}  // namespace quakeb
