// Copyright 2026 The RadDet Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "raddet/annotate.hpp"
#include "raddet/dataset.hpp"
#include "raddet/error.hpp"

namespace raddet {

// Normalized axis-aligned box, centre and size.
struct Box {
  double x_c = 0, y_c = 0, w = 0, h = 0;

  double x0() const { return x_c - w / 2; }
  double x1() const { return x_c + w / 2; }
  double y0() const { return y_c - h / 2; }
  double y1() const { return y_c + h / 2; }
  double area() const { return w * h; }
};

inline Box box_of(const Annotation& a) { return {a.x_c, a.y_c, a.w, a.h}; }

inline double iou(const Box& a, const Box& b) {
  if (!(a.area() > 0) || !(b.area() > 0)) throw DomainError("iou: zero-area box");
  const double iw = std::min(a.x1(), b.x1()) - std::max(a.x0(), b.x0());
  const double ih = std::min(a.y1(), b.y1()) - std::max(a.y0(), b.y0());
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

struct Detection {
  std::string frame_id;
  int class_id = 0;
  Box box;
  double confidence = 0;
};

struct GroundTruth {
  std::string frame_id;
  int class_id = 0;
  Box box;
};

struct MatchResult {
  std::vector<bool> tp;  // aligned with the input detections
  int unmatched_gt = 0;
};

// Greedy matching within one frame and class. Detections are visited in
// descending confidence (ties keep input order); each takes the unmatched
// ground truth of highest IoU >= iou_thresh, lowest index on ties.
inline MatchResult match(std::span<const Detection> dets, std::span<const GroundTruth> gts, double iou_thresh) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].confidence > dets[b].confidence; });
  MatchResult r;
  r.tp.assign(dets.size(), false);
  std::vector<bool> taken(gts.size(), false);
  for (std::size_t di : order) {
    double best = -1;
    std::size_t best_g = gts.size();
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g]) continue;
      const double v = iou(dets[di].box, gts[g].box);
      if (v >= iou_thresh && v > best) {
        best = v;
        best_g = g;
      }
    }
    if (best_g < gts.size()) {
      taken[best_g] = true;
      r.tp[di] = true;
    }
  }
  r.unmatched_gt = static_cast<int>(std::count(taken.begin(), taken.end(), false));
  return r;
}

// All-point interpolated AP of a ranked TP/FP sequence: the area under the
// precision envelope p(r) = max{precision_i : recall_i >= r}.
// Returns nullopt when there is neither ground truth nor any detection,
// and 0 when there is no ground truth but some detection.
inline std::optional<double> average_precision(const std::vector<bool>& ranked_tp, std::int64_t n_gt) {
  if (n_gt == 0) return ranked_tp.empty() ? std::nullopt : std::optional<double>(0.0);
  const std::size_t n = ranked_tp.size();
  std::vector<double> precision(n), recall(n);
  std::int64_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    tp += ranked_tp[i];
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / static_cast<double>(n_gt);
  }
  for (std::size_t i = n; i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);
  double ap = 0, prev_recall = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (recall[i] > prev_recall) {
      ap += (recall[i] - prev_recall) * precision[i];
      prev_recall = recall[i];
    }
  }
  return ap;
}

// Ranks by descending confidence (stable) before computing AP.
inline std::optional<double> average_precision(const std::vector<bool>& tp, std::span<const double> confidence,
                                               std::int64_t n_gt) {
  if (tp.size() != confidence.size()) throw DomainError("average_precision: size mismatch");
  std::vector<std::size_t> order(tp.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return confidence[a] > confidence[b]; });
  std::vector<bool> ranked(tp.size());
  for (std::size_t i = 0; i < order.size(); ++i) ranked[i] = tp[order[i]];
  return average_precision(ranked, n_gt);
}

inline constexpr std::array<double, 10> kIouThresholds = {0.50, 0.55, 0.60, 0.65, 0.70,
                                                          0.75, 0.80, 0.85, 0.90, 0.95};

struct ClassAp {
  int class_id = 0;
  std::int64_t n_gt = 0;
  std::int64_t n_det = 0;
  std::array<double, 10> ap{};  // per IoU threshold
};

struct ScopeResult {
  std::vector<ClassAp> classes;  // classes with ground truth or detections
  std::optional<double> map50;
  std::optional<double> map50_95;
};

struct APResult {
  ScopeResult overall;             // every frame pooled
  std::map<int, ScopeResult> per_snr;
  std::optional<double> cross_snr_map50;  // mean of per-SNR values
  std::optional<double> cross_snr_map50_95;
};

namespace detail {

inline ScopeResult evaluate_scope(const std::vector<const Detection*>& dets,
                                  const std::vector<const GroundTruth*>& gts) {
  std::set<int> classes;
  for (auto* d : dets) classes.insert(d->class_id);
  for (auto* g : gts) classes.insert(g->class_id);

  ScopeResult out;
  for (int cls : classes) {
    // Deterministic rank: confidence desc, frame_id asc, input order.
    std::vector<const Detection*> cd;
    for (auto* d : dets)
      if (d->class_id == cls) cd.push_back(d);
    std::stable_sort(cd.begin(), cd.end(), [](const Detection* a, const Detection* b) {
      if (a->confidence != b->confidence) return a->confidence > b->confidence;
      return a->frame_id < b->frame_id;
    });
    std::map<std::string, std::vector<GroundTruth>> gt_by_frame;
    std::int64_t n_gt = 0;
    for (auto* g : gts)
      if (g->class_id == cls) {
        gt_by_frame[g->frame_id].push_back(*g);
        ++n_gt;
      }
    std::map<std::string, std::vector<std::size_t>> det_pos_by_frame;  // rank positions
    for (std::size_t i = 0; i < cd.size(); ++i) det_pos_by_frame[cd[i]->frame_id].push_back(i);

    ClassAp ca;
    ca.class_id = cls;
    ca.n_gt = n_gt;
    ca.n_det = static_cast<std::int64_t>(cd.size());
    for (std::size_t t = 0; t < kIouThresholds.size(); ++t) {
      std::vector<bool> ranked(cd.size(), false);
      for (const auto& [frame, positions] : det_pos_by_frame) {
        std::vector<Detection> fd;
        for (auto p : positions) fd.push_back(*cd[p]);
        static const std::vector<GroundTruth> kNone;
        auto it = gt_by_frame.find(frame);
        const MatchResult m = match(fd, it == gt_by_frame.end() ? kNone : it->second, kIouThresholds[t]);
        for (std::size_t k = 0; k < positions.size(); ++k) ranked[positions[k]] = m.tp[k];
      }
      ca.ap[t] = average_precision(ranked, n_gt).value_or(0.0);
    }
    out.classes.push_back(ca);
  }
  if (!out.classes.empty()) {
    double s50 = 0, s5095 = 0;
    for (const auto& c : out.classes) {
      s50 += c.ap[0];
      s5095 += std::accumulate(c.ap.begin(), c.ap.end(), 0.0) / static_cast<double>(c.ap.size());
    }
    out.map50 = s50 / static_cast<double>(out.classes.size());
    out.map50_95 = s5095 / static_cast<double>(out.classes.size());
  }
  return out;
}

}  // namespace detail

// AP per class and IoU threshold 0.50:0.05:0.95, pooled over all frames and
// per SNR level. frame_snr maps every known frame to its SNR; detections on
// unknown frames are rejected. Frames without ground truth still count
// their detections as false positives.
inline APResult map_suite(std::span<const Detection> dets, std::span<const GroundTruth> gts,
                          const std::map<std::string, int>& frame_snr) {
  for (const auto& d : dets)
    if (!frame_snr.count(d.frame_id)) throw InputError("detection references unknown frame '" + d.frame_id + "'");
  for (const auto& g : gts)
    if (!frame_snr.count(g.frame_id)) throw InputError("ground truth references unknown frame '" + g.frame_id + "'");

  std::vector<const Detection*> all_d;
  std::vector<const GroundTruth*> all_g;
  std::map<int, std::vector<const Detection*>> snr_d;
  std::map<int, std::vector<const GroundTruth*>> snr_g;
  for (const auto& d : dets) {
    all_d.push_back(&d);
    snr_d[frame_snr.at(d.frame_id)].push_back(&d);
  }
  for (const auto& g : gts) {
    all_g.push_back(&g);
    snr_g[frame_snr.at(g.frame_id)].push_back(&g);
  }
  std::set<int> levels;
  for (const auto& [_, s] : frame_snr) levels.insert(s);

  APResult r;
  r.overall = detail::evaluate_scope(all_d, all_g);
  double s50 = 0, s5095 = 0;
  int n = 0;
  for (int s : levels) {
    ScopeResult sr = detail::evaluate_scope(snr_d[s], snr_g[s]);
    if (sr.map50) {
      s50 += *sr.map50;
      s5095 += *sr.map50_95;
      ++n;
    }
    r.per_snr[s] = std::move(sr);
  }
  if (n) {
    r.cross_snr_map50 = s50 / n;
    r.cross_snr_map50_95 = s5095 / n;
  }
  return r;
}

// ---- prediction and ground-truth files ----------------------------------------

// "frame_id class_id confidence x_c y_c w h" per line. Boxes are clipped to
// the unit square; boxes with no area left are rejected.
inline std::vector<Detection> parse_predictions(std::istream& in) {
  std::vector<Detection> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ss(t);
    Detection d;
    std::string extra;
    if (!(ss >> d.frame_id >> d.class_id >> d.confidence >> d.box.x_c >> d.box.y_c >> d.box.w >> d.box.h))
      throw ParseError(lineno, "expected 'frame_id class_id confidence x_c y_c w h'");
    if (ss >> extra) throw ParseError(lineno, "trailing field '" + extra + "'");
    if (!std::isfinite(d.confidence)) throw ParseError(lineno, "confidence is not finite");
    const double x0 = std::clamp(d.box.x0(), 0.0, 1.0), x1 = std::clamp(d.box.x1(), 0.0, 1.0);
    const double y0 = std::clamp(d.box.y0(), 0.0, 1.0), y1 = std::clamp(d.box.y1(), 0.0, 1.0);
    if (!(x1 > x0) || !(y1 > y0)) throw ParseError(lineno, "box has no area inside the unit square");
    d.box = {(x0 + x1) / 2, (y0 + y1) / 2, x1 - x0, y1 - y0};
    out.push_back(std::move(d));
  }
  return out;
}

inline std::vector<Detection> read_predictions(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  return parse_predictions(f);
}

struct GroundTruthSet {
  std::vector<GroundTruth> boxes;
  std::map<std::string, int> frame_snr;
};

// Loads labels for every manifest row of one split.
inline GroundTruthSet load_ground_truth(const std::filesystem::path& root, Split split) {
  GroundTruthSet out;
  for (const ManifestRow& r : read_manifest(root / "manifest.csv")) {
    if (r.split != split) continue;
    out.frame_snr[r.frame_id] = r.snr_db;
    const std::string rel = r.any_label();
    if (rel.empty()) throw IoError("manifest row " + r.frame_id + " has no label file");
    for (const Annotation& a : read_labels(root / rel))
      out.boxes.push_back({r.frame_id, a.class_id, box_of(a)});
  }
  return out;
}

// CSV: snr,class_id,iou,ap,n_gt,n_det per class and threshold, then
// mean rows (class_id "mean") per scope for iou 0.50 and 0.50:0.95.
// Scope "all" pools every frame; "snr_mean" averages the SNR levels.
inline std::string format_results_csv(const APResult& r) {
  std::string s = "snr,class_id,iou,ap,n_gt,n_det\n";
  char buf[160];
  auto scope_rows = [&](const std::string& scope, const ScopeResult& sr) {
    for (const auto& c : sr.classes) {
      for (std::size_t t = 0; t < kIouThresholds.size(); ++t) {
        std::snprintf(buf, sizeof buf, "%s,%d,%.2f,%.6f,%lld,%lld\n", scope.c_str(), c.class_id, kIouThresholds[t],
                      c.ap[t], static_cast<long long>(c.n_gt), static_cast<long long>(c.n_det));
        s += buf;
      }
    }
  };
  auto mean_rows = [&](const std::string& scope, std::optional<double> m50, std::optional<double> m5095) {
    if (!m50) return;
    std::snprintf(buf, sizeof buf, "%s,mean,0.50,%.6f,,\n%s,mean,0.50:0.95,%.6f,,\n", scope.c_str(), *m50,
                  scope.c_str(), *m5095);
    s += buf;
  };
  scope_rows("all", r.overall);
  for (const auto& [snr, sr] : r.per_snr) scope_rows(std::to_string(snr), sr);
  mean_rows("all", r.overall.map50, r.overall.map50_95);
  for (const auto& [snr, sr] : r.per_snr) mean_rows(std::to_string(snr), sr.map50, sr.map50_95);
  mean_rows("snr_mean", r.cross_snr_map50, r.cross_snr_map50_95);
  return s;
}

}  // namespace raddet
