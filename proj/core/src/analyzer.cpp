// Copyright 2026 The btfuzz Authors.
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

#include "btfuzz/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "btfuzz/error.hpp"
#include "btfuzz/rng.hpp"
#include "svg_plot.hpp"

namespace btfuzz {

CampaignMetrics make_metrics(std::size_t total, std::size_t critical, std::size_t invalid,
                             std::size_t types) {
  if (total == 0) throw Error(ErrorCode::kInvalidArgument, "metrics need a nonempty ledger");
  if (critical + invalid > total) {
    throw Error(ErrorCode::kInvalidArgument, "critical + invalid exceeds total");
  }
  CampaignMetrics m;
  m.total = total;
  m.critical = critical;
  m.invalid = invalid;
  m.non_critical = total - critical - invalid;
  m.types = types;
  const auto n = static_cast<double>(total);
  m.cr = static_cast<double>(critical) / n;
  m.ir = static_cast<double>(invalid) / n;
  m.tr = static_cast<double>(types) / n;
  return m;
}

namespace {

std::vector<const LedgerRecord*> critical_records(const CampaignLedger& ledger) {
  std::vector<const LedgerRecord*> out;
  for (const auto& r : ledger.records) {
    if (r.verdict == Verdict::kValidCritical) out.push_back(&r);
  }
  return out;
}

double sq_dist(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

struct KmeansRun {
  std::vector<std::size_t> assignment;
  std::vector<Point> centroids;
  double inertia = std::numeric_limits<double>::infinity();
};

std::vector<Point> plus_plus_init(const std::vector<Point>& pts, std::size_t k, Rng& rng) {
  std::vector<Point> centers{pts[rng.index(pts.size())]};
  std::vector<double> d2(pts.size());
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centers) best = std::min(best, sq_dist(pts[i], c));
      d2[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total <= 0.0) {
      pick = rng.index(pts.size());
    } else {
      const double r = rng.uniform() * total;
      double acc = 0.0;
      pick = pts.size() - 1;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        acc += d2[i];
        if (r < acc) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(pts[pick]);
  }
  return centers;
}

KmeansRun lloyd(const std::vector<Point>& pts, std::vector<Point> centers, std::size_t max_iter) {
  const std::size_t m = pts.size();
  const std::size_t k = centers.size();
  const std::size_t n = pts.front().size();
  KmeansRun run;
  run.assignment.assign(m, k);
  for (std::size_t it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t best = 0;
      double best_d = sq_dist(pts[i], centers[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d = sq_dist(pts[i], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (run.assignment[i] != best) {
        run.assignment[i] = best;
        changed = true;
      }
    }
    std::vector<Point> sums(k, Point(n, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < m; ++i) {
      ++counts[run.assignment[i]];
      for (std::size_t d = 0; d < n; ++d) sums[run.assignment[i]][d] += pts[i][d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Empty cluster: move it onto the point farthest from its centroid.
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < m; ++i) {
          const double d = sq_dist(pts[i], centers[run.assignment[i]]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centers[c] = pts[far];
        run.assignment[far] = c;
        changed = true;
        continue;
      }
      for (std::size_t d = 0; d < n; ++d) centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
    }
    if (!changed) break;
  }
  run.inertia = 0.0;
  for (std::size_t i = 0; i < m; ++i) run.inertia += sq_dist(pts[i], centers[run.assignment[i]]);
  run.centroids = std::move(centers);
  return run;
}

KmeansRun kmeans(const std::vector<Point>& pts, std::size_t k, const ClusterOptions& opt) {
  Rng rng(opt.seed);
  KmeansRun best;
  for (std::size_t r = 0; r < std::max<std::size_t>(opt.restarts, 1); ++r) {
    KmeansRun run = lloyd(pts, plus_plus_init(pts, k, rng), opt.max_iterations);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

std::size_t distinct_count(const std::vector<Point>& pts) {
  std::vector<Point> sorted = pts;
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

Clustering finish(const std::vector<Point>& pts, std::vector<std::size_t> assignment, std::size_t k,
                  double threshold) {
  // Relabel so cluster ids follow the first appearance of a member.
  std::vector<std::size_t> relabel(k, k);
  std::size_t next = 0;
  for (std::size_t& a : assignment) {
    if (relabel[a] == k) relabel[a] = next++;
    a = relabel[a];
  }
  k = next;
  const std::size_t n = pts.front().size();
  Clustering out;
  out.k = k;
  out.assignment = assignment;
  out.types.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    out.types[c].id = c;
    out.types[c].centroid.assign(n, 0.0);
    out.types[c].spread.assign(n, 0.0);
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto& t = out.types[assignment[i]];
    t.members.push_back(i);
    for (std::size_t d = 0; d < n; ++d) t.centroid[d] += pts[i][d];
  }
  for (auto& t : out.types) {
    const auto cnt = static_cast<double>(t.members.size());
    for (double& v : t.centroid) v /= cnt;
    for (const std::size_t i : t.members) {
      for (std::size_t d = 0; d < n; ++d) {
        t.spread[d] += (pts[i][d] - t.centroid[d]) * (pts[i][d] - t.centroid[d]);
      }
    }
    for (std::size_t d = 0; d < n; ++d) {
      t.spread[d] = std::sqrt(t.spread[d] / cnt);
      if (t.spread[d] < threshold) t.root_cause.push_back(d);
    }
  }
  out.silhouette = k > 1 ? mean_silhouette(pts, out.assignment, k) : 0.0;
  return out;
}

}  // namespace

double mean_silhouette(const std::vector<Point>& points, const std::vector<std::size_t>& assignment,
                       std::size_t k) {
  const std::size_t m = points.size();
  if (m == 0 || k < 2) return 0.0;
  std::vector<std::size_t> counts(k, 0);
  for (const std::size_t a : assignment) ++counts[a];
  double total = 0.0;
  std::vector<double> sums(k);
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) sums[assignment[j]] += std::sqrt(sq_dist(points[i], points[j]));
    }
    const std::size_t own = assignment[i];
    if (counts[own] <= 1) continue;
    const double a = sums[own] / static_cast<double>(counts[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != own && counts[c] > 0) b = std::min(b, sums[c] / static_cast<double>(counts[c]));
    }
    const double denom = std::max(a, b);
    if (std::isfinite(b) && denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(m);
}

Clustering kmeans_cluster(const std::vector<Point>& points, const ClusterOptions& options) {
  if (points.size() < 2) throw Error(ErrorCode::kTooFewPoints, "clustering needs >= 2 points");
  const std::size_t n = points.front().size();
  for (const auto& p : points) {
    if (p.size() != n) throw Error(ErrorCode::kInvalidArgument, "ragged points");
  }
  const std::size_t distinct = distinct_count(points);
  if (distinct == 1) {
    Clustering c = finish(points, std::vector<std::size_t>(points.size(), 0), 1,
                          options.root_cause_spread);
    c.degenerate = true;
    return c;
  }
  if (options.k) {
    if (*options.k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
    const std::size_t k = std::min(*options.k, distinct);
    if (k == 1) {
      return finish(points, std::vector<std::size_t>(points.size(), 0), 1, options.root_cause_spread);
    }
    return finish(points, kmeans(points, k, options).assignment, k, options.root_cause_spread);
  }
  const std::size_t hi = std::min({options.max_k, points.size() - 1, distinct});
  if (hi < 2) {
    return finish(points, std::vector<std::size_t>(points.size(), 0), 1, options.root_cause_spread);
  }
  std::vector<std::pair<std::size_t, double>> candidates;
  std::vector<std::size_t> best_assignment;
  std::size_t best_k = 0;
  double best_s = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 2; k <= hi; ++k) {
    const KmeansRun run = kmeans(points, k, options);
    const double s = mean_silhouette(points, run.assignment, k);
    candidates.emplace_back(k, s);
    if (s > best_s) {
      best_s = s;
      best_k = k;
      best_assignment = run.assignment;
    }
  }
  Clustering c = finish(points, best_assignment, best_k, options.root_cause_spread);
  c.candidates = std::move(candidates);
  return c;
}

Clustering cluster_critical(const CampaignLedger& ledger, std::optional<std::size_t> k) {
  const auto crit = critical_records(ledger);
  std::vector<Point> pts;
  pts.reserve(crit.size());
  for (const auto* r : crit) pts.push_back(r->u);
  ClusterOptions opt;
  opt.k = k;
  opt.seed = ledger.seed;
  Clustering c = kmeans_cluster(pts, opt);
  for (auto& t : c.types) {
    for (std::size_t& m : t.members) m = crit[m]->index;
  }
  return c;
}

CampaignMetrics campaign_metrics(const CampaignLedger& ledger, std::optional<std::size_t> k) {
  std::size_t critical = 0;
  std::size_t invalid = 0;
  for (const auto& r : ledger.records) {
    if (r.verdict == Verdict::kValidCritical) ++critical;
    if (r.verdict == Verdict::kInvalid) ++invalid;
  }
  std::size_t types = critical;
  if (critical >= 2) types = cluster_critical(ledger, k).k;
  return make_metrics(ledger.records.size(), critical, invalid, types);
}

CorrelationMatrix correlation_matrix(const std::vector<Point>& points,
                                     const std::vector<std::string>& names) {
  if (points.size() < 3) throw Error(ErrorCode::kTooFewPoints, "correlation needs >= 3 points");
  const std::size_t n = points.front().size();
  const auto m = static_cast<double>(points.size());
  std::vector<double> mean(n, 0.0);
  for (const auto& p : points) {
    if (p.size() != n) throw Error(ErrorCode::kInvalidArgument, "ragged points");
    for (std::size_t d = 0; d < n; ++d) mean[d] += p[d] / m;
  }
  std::vector<std::vector<double>> cov(n, std::vector<double>(n, 0.0));
  for (const auto& p : points) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b <= a; ++b) cov[a][b] += (p[a] - mean[a]) * (p[b] - mean[b]);
    }
  }
  CorrelationMatrix out;
  out.names = names;
  if (out.names.size() != n) {
    out.names.clear();
    for (std::size_t d = 0; d < n; ++d) out.names.push_back("x" + std::to_string(d));
  }
  out.zero_variance.assign(n, false);
  for (std::size_t d = 0; d < n; ++d) out.zero_variance[d] = cov[d][d] / m < 1e-24;
  out.r.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    out.r[a][a] = 1.0;
    for (std::size_t b = 0; b < a; ++b) {
      if (out.zero_variance[a] || out.zero_variance[b]) continue;
      const double r = std::clamp(cov[a][b] / std::sqrt(cov[a][a] * cov[b][b]), -1.0, 1.0);
      out.r[a][b] = out.r[b][a] = r;
    }
  }
  return out;
}

CorrelationMatrix variable_correlation(const CampaignLedger& ledger) {
  std::vector<Point> pts;
  for (const auto* r : critical_records(ledger)) pts.push_back(r->u);
  return correlation_matrix(pts, ledger.variables);
}

namespace {

constexpr std::array<const char*, 8> kPalette{"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                              "#66a61e", "#e6ab02", "#a6761d", "#666666"};

const char* verdict_color(Verdict v) {
  switch (v) {
    case Verdict::kValidCritical: return "#d62728";
    case Verdict::kValidNonCritical: return "#1f77b4";
    case Verdict::kInvalid: return "#9e9e9e";
  }
  return "#000000";
}

std::string fixed(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content,
                std::vector<std::filesystem::path>& files) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
  files.push_back(path);
}

std::string variable_name(const CampaignLedger& ledger, std::size_t d) {
  return d < ledger.variables.size() ? ledger.variables[d] : "x" + std::to_string(d);
}

std::string iterations_svg(const CampaignLedger& ledger) {
  const std::size_t n = ledger.records.empty() ? 0 : ledger.records.front().u.size();
  const double pw = 560.0;
  const double ph = 140.0;
  const double left = 60.0;
  const double top = 60.0;
  const double gap = 40.0;
  svg::Canvas c(left + pw + 30.0, top + static_cast<double>(n) * (ph + gap) + 20.0);
  c.text(left, 20.0, "Sampled values over iterations", 14.0);
  const double total = std::max<double>(1.0, static_cast<double>(ledger.records.size() - 1));
  double lx = left;
  for (const Verdict v : {Verdict::kValidCritical, Verdict::kValidNonCritical, Verdict::kInvalid}) {
    c.circle(lx + 4.0, 34.0, 4.0, verdict_color(v));
    c.text(lx + 12.0, 38.0, std::string(to_string(v)), 10.0);
    lx += 95.0;
  }
  for (std::size_t d = 0; d < n; ++d) {
    const double y0 = top + static_cast<double>(d) * (ph + gap);
    c.rect(left, y0, pw, ph, "none", "#333333");
    c.text(left - 8.0, y0 + 10.0, "1", 9.0, "end");
    c.text(left - 8.0, y0 + ph, "0", 9.0, "end");
    c.text(left + pw / 2.0, y0 - 6.0, variable_name(ledger, d), 12.0, "middle");
    for (std::size_t i = 0; i < ledger.records.size(); ++i) {
      const auto& r = ledger.records[i];
      if (d >= r.u.size()) continue;
      const double x = left + pw * static_cast<double>(i) / total;
      const double y = y0 + ph * (1.0 - std::clamp(r.u[d], 0.0, 1.0));
      c.circle(x, y, 2.0, verdict_color(r.verdict), 0.8);
    }
  }
  return c.str();
}

std::string clusters_svg(const CampaignLedger& ledger, const std::vector<Point>& pts,
                         const Clustering& cl) {
  const std::size_t n = pts.front().size();
  const double left = 60.0;
  const double top = 50.0;
  const double w = 560.0;
  const double h = 300.0;
  svg::Canvas c(left + w + 60.0, top + h + 60.0);
  c.text(left, 24.0, "Critical scenarios by violation type", 14.0);
  const auto axis_x = [&](std::size_t d) {
    return n > 1 ? left + w * static_cast<double>(d) / static_cast<double>(n - 1) : left + w / 2.0;
  };
  for (std::size_t d = 0; d < n; ++d) {
    c.line(axis_x(d), top, axis_x(d), top + h, "#333333");
    c.text(axis_x(d), top + h + 18.0, variable_name(ledger, d), 11.0, "middle");
  }
  const auto y_of = [&](double u) { return top + h * (1.0 - std::clamp(u, 0.0, 1.0)); };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const char* col = kPalette[cl.assignment[i] % kPalette.size()];
    for (std::size_t d = 0; d + 1 < n; ++d) {
      c.line(axis_x(d), y_of(pts[i][d]), axis_x(d + 1), y_of(pts[i][d + 1]), col, 0.6);
    }
    if (n == 1) c.circle(axis_x(0), y_of(pts[i][0]), 2.5, col);
  }
  for (const auto& t : cl.types) {
    const char* col = kPalette[t.id % kPalette.size()];
    for (std::size_t d = 0; d + 1 < n; ++d) {
      c.line(axis_x(d), y_of(t.centroid[d]), axis_x(d + 1), y_of(t.centroid[d + 1]), "#000000",
             3.5);
      c.line(axis_x(d), y_of(t.centroid[d]), axis_x(d + 1), y_of(t.centroid[d + 1]), col, 2.0);
    }
    c.text(left + w + 8.0, top + 14.0 * static_cast<double>(t.id + 1),
           "type " + std::to_string(t.id + 1) + " (" + std::to_string(t.members.size()) + ")", 10.0);
  }
  return c.str();
}

std::string projection_svg(const CampaignLedger& ledger, const std::vector<Point>& pts,
                           const Clustering& cl, std::array<std::size_t, 3> axes) {
  const double size = 520.0;
  svg::Canvas c(size, size);
  const double az = 0.6;
  const double el = 0.45;
  const double scale = 260.0;
  const double cx = size / 2.0;
  const double cy = size / 2.0 + 30.0;
  const auto project = [&](double x, double y, double z) {
    x -= 0.5;
    y -= 0.5;
    z -= 0.5;
    const double xr = std::cos(az) * x - std::sin(az) * y;
    const double yr = std::sin(az) * x + std::cos(az) * y;
    const double sy = z * std::cos(el) - yr * std::sin(el);
    return std::pair<double, double>{cx + scale * xr, cy - scale * sy};
  };
  c.text(20.0, 24.0, "Critical scenarios: " + variable_name(ledger, axes[0]) + ", " +
                         variable_name(ledger, axes[1]) + ", " + variable_name(ledger, axes[2]),
         14.0);
  for (int e = 0; e < 12; ++e) {
    const int axis = e / 4;
    const int a = (e % 4) & 1;
    const int b = ((e % 4) >> 1) & 1;
    double p0[3];
    double p1[3];
    p0[axis] = 0.0;
    p1[axis] = 1.0;
    p0[(axis + 1) % 3] = p1[(axis + 1) % 3] = a;
    p0[(axis + 2) % 3] = p1[(axis + 2) % 3] = b;
    const auto [x0, y0] = project(p0[0], p0[1], p0[2]);
    const auto [x1, y1] = project(p1[0], p1[1], p1[2]);
    c.line(x0, y0, x1, y1, a == 0 && b == 0 ? "#333333" : "#cccccc");
  }
  const auto label = [&](double x, double y, double z, const std::string& text) {
    const auto [px, py] = project(x, y, z);
    c.text(px, py, text, 11.0, "middle");
  };
  label(1.1, 0.0, 0.0, variable_name(ledger, axes[0]));
  label(0.0, 1.1, 0.0, variable_name(ledger, axes[1]));
  label(0.0, 0.0, 1.1, variable_name(ledger, axes[2]));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto [px, py] = project(pts[i][axes[0]], pts[i][axes[1]], pts[i][axes[2]]);
    c.circle(px, py, 3.0, kPalette[cl.assignment[i] % kPalette.size()], 0.85);
  }
  for (const auto& t : cl.types) {
    const auto [px, py] = project(t.centroid[axes[0]], t.centroid[axes[1]], t.centroid[axes[2]]);
    c.circle(px, py, 7.0, "#000000");
    c.circle(px, py, 5.0, kPalette[t.id % kPalette.size()]);
  }
  return c.str();
}

std::string heatmap_svg(const CorrelationMatrix& cm) {
  const std::size_t n = cm.names.size();
  const double cell = 70.0;
  const double left = 90.0;
  const double top = 60.0;
  svg::Canvas c(left + cell * static_cast<double>(n) + 20.0, top + cell * static_cast<double>(n) + 20.0);
  c.text(left, 24.0, "Correlation of critical-scenario variables", 14.0);
  for (std::size_t a = 0; a < n; ++a) {
    c.text(left - 8.0, top + cell * (static_cast<double>(a) + 0.55), cm.names[a], 11.0, "end");
    c.text(left + cell * (static_cast<double>(a) + 0.5), top - 8.0, cm.names[a], 11.0, "middle");
    for (std::size_t b = 0; b < n; ++b) {
      const double x = left + cell * static_cast<double>(b);
      const double y = top + cell * static_cast<double>(a);
      c.rect(x, y, cell, cell, svg::diverging(cm.r[a][b]), "#ffffff");
      c.text(x + cell / 2.0, y + cell / 2.0 + 4.0, fixed(cm.r[a][b], 2), 11.0, "middle");
    }
  }
  return c.str();
}

}  // namespace

ReportBundle report(const CampaignLedger& ledger, const std::filesystem::path& dir,
                    const ReportOptions& options) {
  if (ledger.records.empty()) throw Error(ErrorCode::kTooFewPoints, "empty ledger");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string());

  ReportBundle out;
  const auto crit = critical_records(ledger);
  std::vector<Point> pts;
  for (const auto* r : crit) pts.push_back(r->u);
  const std::size_t n = ledger.records.front().u.size();

  if (pts.size() >= 2) out.clustering = cluster_critical(ledger, options.k);
  if (pts.size() >= 3) out.correlation = correlation_matrix(pts, ledger.variables);
  const std::size_t types = out.clustering ? out.clustering->k : pts.size();
  out.metrics = make_metrics(ledger.records.size(), crit.size(),
                             static_cast<std::size_t>(std::count_if(
                                 ledger.records.begin(), ledger.records.end(),
                                 [](const LedgerRecord& r) { return r.verdict == Verdict::kInvalid; })),
                             types);

  if (crit.empty()) out.notes.push_back("no critical scenarios");
  if (crit.size() == 1) out.notes.push_back("single critical scenario, clustering skipped");
  if (!crit.empty() && crit.size() < 3) out.notes.push_back("fewer than 3 critical scenarios, correlation skipped");
  if (out.clustering && out.clustering->degenerate) {
    out.notes.push_back("all critical scenarios coincide, single degenerate cluster");
  }
  if (out.correlation) {
    for (std::size_t d = 0; d < out.correlation->zero_variance.size(); ++d) {
      if (out.correlation->zero_variance[d]) {
        out.notes.push_back("zero variance in " + out.correlation->names[d] + ", correlations set to 0");
      }
    }
  }

  const auto& m = out.metrics;
  write_file(dir / "metrics.csv",
             "total,critical,non_critical,invalid,types,cr,ir,tr\n" + std::to_string(m.total) + "," +
                 std::to_string(m.critical) + "," + std::to_string(m.non_critical) + "," +
                 std::to_string(m.invalid) + "," + std::to_string(m.types) + "," + fixed(m.cr) + "," +
                 fixed(m.ir) + "," + fixed(m.tr) + "\n",
             out.files);

  std::string clusters = "cluster,size";
  for (std::size_t d = 0; d < n; ++d) clusters += "," + variable_name(ledger, d);
  clusters += ",root_cause,members\n";
  if (out.clustering) {
    for (const auto& t : out.clustering->types) {
      clusters += std::to_string(t.id + 1) + "," + std::to_string(t.members.size());
      for (const double v : t.centroid) clusters += "," + fixed(v);
      std::string causes;
      for (const std::size_t d : t.root_cause) causes += (causes.empty() ? "" : ";") + variable_name(ledger, d);
      std::string members;
      for (const std::size_t i : t.members) members += (members.empty() ? "" : ";") + std::to_string(i);
      clusters += "," + causes + "," + members + "\n";
    }
  }
  write_file(dir / "clusters.csv", clusters, out.files);

  std::string corr = "variable";
  for (std::size_t d = 0; d < n; ++d) corr += "," + variable_name(ledger, d);
  corr += "\n";
  if (out.correlation) {
    for (std::size_t a = 0; a < n; ++a) {
      corr += out.correlation->names[a];
      for (std::size_t b = 0; b < n; ++b) corr += "," + fixed(out.correlation->r[a][b]);
      corr += "\n";
    }
  }
  write_file(dir / "correlations.csv", corr, out.files);

  std::string summary = "scenario " + ledger.scenario + "\nalgorithm " + ledger.algorithm +
                        "\nseed " + std::to_string(ledger.seed) + "\nevaluations " +
                        std::to_string(m.total) + "\nCR " + fixed(m.cr) + "\nIR " + fixed(m.ir) +
                        "\nTR " + fixed(m.tr) + "\n";
  if (out.clustering) {
    summary += "clusters " + std::to_string(out.clustering->k) + " silhouette " +
               fixed(out.clustering->silhouette, 4) + "\n";
  }
  for (const auto& note : out.notes) summary += "note: " + note + "\n";
  write_file(dir / "summary.txt", summary, out.files);

  write_file(dir / "iterations.svg", iterations_svg(ledger), out.files);
  if (out.clustering) {
    std::array<std::size_t, 3> axes = options.projection;
    for (auto& a : axes) a = std::min(a, n - 1);
    write_file(dir / "clusters.svg", clusters_svg(ledger, pts, *out.clustering), out.files);
    write_file(dir / "projection3d.svg", projection_svg(ledger, pts, *out.clustering, axes),
               out.files);
  }
  if (out.correlation) write_file(dir / "correlation.svg", heatmap_svg(*out.correlation), out.files);
  return out;
}

}  // namespace btfuzz
