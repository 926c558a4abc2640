#include "roc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "error.hpp"
#include "io_util.hpp"

namespace oer {

namespace {

struct ClassCounts {
  std::size_t pos = 0;
  std::size_t neg = 0;
};

ClassCounts check_two_classes(const ScoredDataset& data) {
  ClassCounts c;
  for (const auto& s : data.samples) (s.label > 0 ? c.pos : c.neg)++;
  if (c.pos == 0 || c.neg == 0)
    throw Error(ErrorCode::argument,
                std::string("need both classes present, missing ") +
                    (c.pos == 0 ? "positives" : "negatives"));
  return c;
}

std::vector<std::size_t> assign_all(const ScoredDataset& data,
                                    const BinPartition& partition) {
  std::vector<std::size_t> bins;
  bins.reserve(data.size());
  for (const auto& s : data.samples) bins.push_back(partition.assign(s.aux));
  return bins;
}

OperatingPoint point_for_thresholds(const ScoredDataset& data,
                                    const std::vector<std::size_t>& bins,
                                    const std::vector<double>& k,
                                    const ClassCounts& counts) {
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    const auto& s = data.samples[i];
    if (s.score >= k[bins[i]]) (s.label > 0 ? tp : fp)++;
  }
  OperatingPoint p;
  p.tpr = static_cast<double>(tp) / static_cast<double>(counts.pos);
  p.fpr = static_cast<double>(fp) / static_cast<double>(counts.neg);
  return p;
}

bool point_less(const OperatingPoint& a, const OperatingPoint& b) {
  if (a.fpr != b.fpr) return a.fpr < b.fpr;
  return a.tpr < b.tpr;
}

double cross(const OperatingPoint& o, const OperatingPoint& a,
             const OperatingPoint& b) {
  return (a.fpr - o.fpr) * (b.tpr - o.tpr) -
         (a.tpr - o.tpr) * (b.fpr - o.fpr);
}

}  // namespace

OperatingPoint empirical_point(const ScoredDataset& data,
                               const BinPartition& partition,
                               const ThresholdCurve& curve) {
  ClassCounts counts = check_two_classes(data);
  if (curve.thresholds.size() != partition.bin_count())
    throw Error(ErrorCode::argument,
                "threshold vector length " +
                    std::to_string(curve.thresholds.size()) +
                    " does not match partition bin count " +
                    std::to_string(partition.bin_count()));
  std::vector<std::size_t> bins = assign_all(data, partition);
  OperatingPoint p =
      point_for_thresholds(data, bins, curve.thresholds, counts);
  p.param = curve.lambda;
  return p;
}

RocCurve fixed_threshold_curve(const ScoredDataset& data) {
  ClassCounts counts = check_two_classes(data);
  std::vector<std::pair<double, int>> scored;
  scored.reserve(data.size());
  for (const auto& s : data.samples) scored.emplace_back(s.score, s.label);
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  RocCurve curve;
  curve.param_kind = ParamKind::threshold;
  curve.points.push_back({0.0, 0.0, std::nullopt});
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < scored.size()) {
    double s = scored[i].first;
    while (i < scored.size() && scored[i].first == s) {
      (scored[i].second > 0 ? tp : fp)++;
      ++i;
    }
    curve.points.push_back(
        {static_cast<double>(fp) / static_cast<double>(counts.neg),
         static_cast<double>(tp) / static_cast<double>(counts.pos), s});
  }
  curve.anchored = true;  // last group reaches (1,1) by construction
  return curve;
}

RocCurve offset_baseline_curve(const ScoredDataset& data, const BinModel& model,
                               BaselineMode mode, int n_offsets) {
  ClassCounts counts = check_two_classes(data);
  if (n_offsets < 2)
    throw Error(ErrorCode::argument, "need at least 2 offsets");
  if (data.aux_dim() != model.partition().aux_dim())
    throw Error(ErrorCode::argument,
                "data aux dimension does not match the model partition");

  std::size_t nbins = model.bin_count();
  std::vector<double> base(nbins);
  for (std::size_t i = 0; i < nbins; ++i)
    base[i] = mode == BaselineMode::constant_fpr ? model.stats(i).mu_neg
                                                 : model.stats(i).mu_pos;

  double s_min = std::numeric_limits<double>::infinity();
  double s_max = -std::numeric_limits<double>::infinity();
  for (const auto& s : data.samples) {
    s_min = std::min(s_min, s.score);
    s_max = std::max(s_max, s.score);
  }
  auto [b_min_it, b_max_it] = std::minmax_element(base.begin(), base.end());
  double pad = 1e-6 * (s_max - s_min) + 1e-9;
  double c_lo = s_min - *b_max_it - pad;  // every sample classified positive
  double c_hi = s_max - *b_min_it + pad;  // no sample classified positive

  std::vector<std::size_t> bins = assign_all(data, model.partition());
  RocCurve curve;
  curve.param_kind = ParamKind::offset;
  std::vector<double> k(nbins);
  for (int t = 0; t < n_offsets; ++t) {
    double c = c_hi + (c_lo - c_hi) * static_cast<double>(t) /
                          static_cast<double>(n_offsets - 1);
    for (std::size_t i = 0; i < nbins; ++i) k[i] = base[i] + c;
    OperatingPoint p = point_for_thresholds(data, bins, k, counts);
    p.param = c;
    curve.points.push_back(p);
  }
  std::stable_sort(curve.points.begin(), curve.points.end(), point_less);
  // identical consecutive operating points add nothing
  std::vector<OperatingPoint> dedup;
  for (const auto& p : curve.points)
    if (dedup.empty() || p.fpr != dedup.back().fpr ||
        p.tpr != dedup.back().tpr)
      dedup.push_back(p);
  curve.points = std::move(dedup);
  curve.anchored = curve.points.front().fpr == 0.0 &&
                   curve.points.front().tpr == 0.0 &&
                   curve.points.back().fpr == 1.0 &&
                   curve.points.back().tpr == 1.0;
  return curve;
}

RocCurve oer_empirical_curve(const ScoredDataset& data,
                             const BinPartition& partition,
                             const std::vector<ThresholdCurve>& curves) {
  ClassCounts counts = check_two_classes(data);
  std::vector<std::size_t> bins = assign_all(data, partition);
  RocCurve out;
  out.param_kind = ParamKind::lambda;
  for (const auto& c : curves) {
    if (c.thresholds.size() != partition.bin_count())
      throw Error(ErrorCode::argument,
                  "threshold vector length does not match the partition");
    OperatingPoint p = point_for_thresholds(data, bins, c.thresholds, counts);
    p.param = c.lambda;
    out.points.push_back(p);
  }
  std::stable_sort(out.points.begin(), out.points.end(), point_less);
  out.anchored = false;
  return out;
}

RocCurve upper_envelope(const RocCurve& curve) {
  std::vector<OperatingPoint> pts = curve.points;
  pts.push_back({0.0, 0.0, std::nullopt});
  pts.push_back({1.0, 1.0, std::nullopt});
  for (const auto& p : pts) {
    if (!(p.fpr >= 0.0 && p.fpr <= 1.0 && p.tpr >= 0.0 && p.tpr <= 1.0) ||
        !std::isfinite(p.fpr) || !std::isfinite(p.tpr))
      throw Error(ErrorCode::argument, "operating point outside [0,1]^2");
  }
  std::stable_sort(pts.begin(), pts.end(), point_less);

  RocCurve out;
  out.param_kind = curve.param_kind;
  double best = 0.0;
  std::size_t i = 0;
  while (i < pts.size()) {
    double f = pts[i].fpr;
    OperatingPoint top = pts[i];
    while (i < pts.size() && pts[i].fpr == f) top = pts[i++];  // max tpr at f
    if (top.tpr > best) best = top.tpr;
    OperatingPoint q;
    q.fpr = f;
    q.tpr = best;
    q.param = (top.tpr == best) ? top.param : std::nullopt;
    out.points.push_back(q);
  }
  out.anchored = true;
  return out;
}

RocCurve rocch(const std::vector<RocCurve>& curves) {
  if (curves.empty())
    throw Error(ErrorCode::argument, "need at least one curve for the hull");
  std::vector<OperatingPoint> pts;
  for (const auto& c : curves)
    for (const auto& p : c.points) {
      if (!(p.fpr >= 0.0 && p.fpr <= 1.0 && p.tpr >= 0.0 && p.tpr <= 1.0))
        throw Error(ErrorCode::argument, "operating point outside [0,1]^2");
      pts.push_back({p.fpr, p.tpr, std::nullopt});
    }
  pts.push_back({0.0, 0.0, std::nullopt});
  pts.push_back({1.0, 1.0, std::nullopt});
  std::sort(pts.begin(), pts.end(), point_less);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const OperatingPoint& a, const OperatingPoint& b) {
                          return a.fpr == b.fpr && a.tpr == b.tpr;
                        }),
            pts.end());

  // upper hull, left to right: keep only clockwise turns
  std::vector<OperatingPoint> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2 &&
           cross(hull[hull.size() - 2], hull.back(), p) >= 0.0)
      hull.pop_back();
    hull.push_back(p);
  }
  RocCurve out;
  out.points = std::move(hull);
  out.anchored = true;
  return out;
}

double auc(const RocCurve& curve) {
  if (!curve.anchored)
    throw Error(ErrorCode::argument,
                "AUC needs an anchored curve; build an envelope or hull first");
  if (curve.points.size() < 2)
    throw Error(ErrorCode::argument, "curve has fewer than two points");
  if (curve.points.front().fpr != 0.0 || curve.points.back().fpr != 1.0)
    throw Error(ErrorCode::argument, "anchored curve must span fpr 0 to 1");
  double area = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    if (b.fpr < a.fpr)
      throw Error(ErrorCode::argument, "curve fpr must be nondecreasing");
    area += (b.fpr - a.fpr) * 0.5 * (a.tpr + b.tpr);
  }
  return area;
}

PairwiseAuc auc_pairwise(
    const ScoredDataset& data,
    const std::function<double(const LabeledSample&)>& scorer,
    std::uint64_t mc_seed) {
  std::vector<double> pos, neg;
  for (const auto& s : data.samples) {
    double v = scorer ? scorer(s) : s.score;
    if (!std::isfinite(v))
      throw Error(ErrorCode::argument, "scorer produced a non-finite value");
    (s.label > 0 ? pos : neg).push_back(v);
  }
  if (pos.empty() || neg.empty())
    throw Error(ErrorCode::argument,
                std::string("need both classes present, missing ") +
                    (pos.empty() ? "positives" : "negatives"));

  PairwiseAuc result;
  std::uint64_t n_pairs =
      static_cast<std::uint64_t>(pos.size()) * neg.size();
  if (n_pairs <= 100000000ULL) {
    std::uint64_t twice = 0;  // wins count 2, ties count 1
    for (double a : pos)
      for (double b : neg) {
        if (a > b)
          twice += 2;
        else if (a == b)
          twice += 1;
      }
    result.value =
        static_cast<double>(twice) / (2.0 * static_cast<double>(n_pairs));
    result.exact = true;
    result.std_error = 0.0;
    return result;
  }

  constexpr std::uint64_t kDraws = 2000000;
  std::mt19937_64 rng(mc_seed);
  std::uniform_int_distribution<std::size_t> dp(0, pos.size() - 1);
  std::uniform_int_distribution<std::size_t> dn(0, neg.size() - 1);
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t t = 0; t < kDraws; ++t) {
    double a = pos[dp(rng)];
    double b = neg[dn(rng)];
    double v = a > b ? 1.0 : (a == b ? 0.5 : 0.0);
    sum += v;
    sumsq += v * v;
  }
  double m = sum / static_cast<double>(kDraws);
  double var = (sumsq / static_cast<double>(kDraws) - m * m) /
               static_cast<double>(kDraws - 1);
  result.value = m;
  result.exact = false;
  result.std_error = std::sqrt(std::max(var, 0.0));
  return result;
}

void write_curve_csv(const std::string& path, const RocCurve& curve) {
  std::ostringstream os;
  const char* pname = "param";
  switch (curve.param_kind) {
    case ParamKind::threshold: pname = "threshold"; break;
    case ParamKind::offset: pname = "offset"; break;
    case ParamKind::lambda: pname = "lambda"; break;
    case ParamKind::none: break;
  }
  os << "fpr,tpr," << pname << '\n';
  char buf[64];
  for (const auto& p : curve.points) {
    std::snprintf(buf, sizeof(buf), "%.17g", p.fpr);
    os << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", p.tpr);
    os << buf << ',';
    if (p.param) {
      std::snprintf(buf, sizeof(buf), "%.17g", *p.param);
      os << buf;
    }
    os << '\n';
  }
  atomic_write_text(path, os.str());
}

}  // namespace oer
