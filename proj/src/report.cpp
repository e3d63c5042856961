#include "lbnmobo/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "lbnmobo/metrics.hpp"

namespace lbnmobo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_text(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw LoadError("cannot open " + p.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    return os;
}

}  // namespace

SnapshotInfo last_snapshot_info(const fs::path& run_dir) {
    const auto snaps = list_snapshots(run_dir);
    if (snaps.empty()) throw LoadError("no snapshots in " + run_dir.string());
    try {
        const auto j = json::parse(read_text(snapshot_dir(run_dir, snaps.back()) / "state.json"));
        SnapshotInfo info;
        info.problem = j.at("problem").get<std::string>();
        info.mode = j.at("mode").get<std::string>();
        info.iteration = j.at("iteration").get<int>();
        for (const auto& d : j.at("directions")) info.directions.push_back(parse_direction(d.get<std::string>()));
        info.reference_point = j.at("reference_point").get<Vector>();
        return info;
    } catch (const json::exception& e) {
        throw LoadError(std::string("corrupt state.json: ") + e.what());
    }
}

std::vector<IterationMetrics> load_history(const fs::path& run_dir) {
    const auto snaps = list_snapshots(run_dir);
    if (snaps.empty()) throw LoadError("no snapshots in " + run_dir.string());
    std::vector<IterationMetrics> out;
    for (int k : snaps) out.push_back(IterationMetrics::from_json(read_text(snapshot_dir(run_dir, k) / "metrics.json")));
    return out;
}

void write_hv_evolution_csv(std::ostream& os, const std::vector<IterationMetrics>& history) {
    os << "iteration,hv,stderr,front_size,dataset_size,train_s,acquire_s,evaluate_s\n";
    for (const auto& m : history)
        os << m.iteration << ',' << format_double(m.hv_estimate) << ',' << format_double(m.hv_std_error) << ','
           << m.front_size << ',' << m.dataset_size << ',' << format_double(m.wall_times.train) << ','
           << format_double(m.wall_times.acquire) << ',' << format_double(m.wall_times.evaluate) << '\n';
}

void write_compare_csv(std::ostream& os, const std::vector<IterationMetrics>& a,
                       const std::vector<IterationMetrics>& b) {
    std::map<int, std::pair<const IterationMetrics*, const IterationMetrics*>> rows;
    for (const auto& m : a) rows[m.iteration].first = &m;
    for (const auto& m : b) rows[m.iteration].second = &m;
    os << "iteration,hv_a,stderr_a,hv_b,stderr_b\n";
    for (const auto& [k, pair] : rows) {
        os << k;
        for (const auto* m : {pair.first, pair.second}) {
            if (m) os << ',' << format_double(m->hv_estimate) << ',' << format_double(m->hv_std_error);
            else os << ",,";
        }
        os << '\n';
    }
}

std::string render_front_svg(const std::vector<Vector>& front, const std::vector<Vector>& reference,
                             const std::string& title) {
    constexpr double W = 640, H = 480, pad = 60;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto* set : {&front, &reference})
        for (const auto& p : *set) {
            if (p.size() < 2) continue;
            x0 = std::min(x0, p[0]);
            x1 = std::max(x1, p[0]);
            y0 = std::min(y0, p[1]);
            y1 = std::max(y1, p[1]);
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
    if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
    auto sx = [&](double v) { return pad + (v - x0) / (x1 - x0) * (W - 2 * pad); };
    auto sy = [&](double v) { return H - pad - (v - y0) / (y1 - y0) * (H - 2 * pad); };

    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
       << ' ' << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
       << title << "</text>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\"" << H - pad
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad
       << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = x0 + (x1 - x0) * t / 4.0, fy = y0 + (y1 - y0) * t / 4.0;
        os << "<text x=\"" << sx(fx) << "\" y=\"" << H - pad + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fx << "</text>\n";
        os << "<text x=\"" << pad - 6 << "\" y=\"" << sy(fy) + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fy << "</text>\n";
    }
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 16
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">f1</text>\n";
    os << "<text x=\"18\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
       << "transform=\"rotate(-90 18 " << H / 2 << ")\">f2</text>\n";

    if (!reference.empty()) {
        // Break the polyline wherever the reference front jumps (ZDT3 segments).
        auto sorted = reference;
        std::sort(sorted.begin(), sorted.end());
        const double gap = 0.02 * (x1 - x0);
        os << "<g fill=\"none\" stroke=\"#888\" stroke-width=\"1.5\">\n";
        std::size_t start = 0;
        for (std::size_t i = 1; i <= sorted.size(); ++i) {
            if (i < sorted.size() && sorted[i][0] - sorted[i - 1][0] <= gap) continue;
            os << "<polyline points=\"";
            for (std::size_t k = start; k < i; ++k) os << sx(sorted[k][0]) << ',' << sy(sorted[k][1]) << ' ';
            os << "\"/>\n";
            start = i;
        }
        os << "</g>\n";
    }
    os << "<g fill=\"#c0392b\">\n";
    for (const auto& p : front)
        if (p.size() >= 2) os << "<circle cx=\"" << sx(p[0]) << "\" cy=\"" << sy(p[1]) << "\" r=\"2.5\"/>\n";
    os << "</g>\n</svg>\n";
    return os.str();
}

ReportFiles write_report(const fs::path& run_dir, const fs::path& out_dir) {
    const auto info = last_snapshot_info(run_dir);
    const auto history = load_history(run_dir);
    fs::create_directories(out_dir);
    ReportFiles files{out_dir / "hv_evolution.csv", out_dir / "pareto_front.csv", out_dir / "pareto_front.svg"};
    {
        auto os = open_out(files.hv_evolution);
        write_hv_evolution_csv(os, history);
    }
    const auto ds = Dataset::load_csv(snapshot_dir(run_dir, info.iteration) / "dataset.csv", info.directions);
    const auto pareto = extract_pareto(ds);
    {
        auto os = open_out(files.pareto_front);
        const std::size_t n = ds.dim(), m = ds.num_objectives();
        for (std::size_t i = 0; i < n; ++i) os << "x_" << i << ',';
        for (std::size_t j = 0; j < m; ++j) os << "y_" << j << (j + 1 < m ? "," : "\n");
        for (std::size_t r = 0; r < pareto.designs.size(); ++r) {
            for (double v : pareto.designs[r]) os << format_double(v) << ',';
            for (std::size_t j = 0; j < m; ++j) os << format_double(pareto.performances[r][j]) << (j + 1 < m ? "," : "\n");
        }
    }
    std::vector<Vector> reference;
    if (info.problem == "zdt1" || info.problem == "zdt2" || info.problem == "zdt3")
        reference = reference_front(info.problem.back() - '0', 1000);
    {
        auto os = open_out(files.svg);
        os << render_front_svg(pareto.performances, reference,
                               info.problem + " (" + info.mode + "), iteration " + std::to_string(info.iteration));
    }
    return files;
}

}  // namespace lbnmobo
