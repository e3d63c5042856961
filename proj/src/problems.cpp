#include "lbnmobo/problems.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>

namespace lbnmobo {

std::vector<Vector> evaluate_batch(const ProblemDefinition& problem, std::span<const Vector> xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!problem.space.contains(xs[i]))
            throw ArgumentError(problem.name + ": design " + std::to_string(i) + " is outside the design space");
    }
    if (xs.empty()) return {};
    auto ys = problem.evaluator(xs);
    if (ys.size() != xs.size())
        throw EvaluationError(problem.name + ": evaluator returned " + std::to_string(ys.size()) + " rows for " +
                              std::to_string(xs.size()) + " designs");
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (ys[i].size() != problem.num_objectives)
            throw EvaluationError(problem.name + ": row " + std::to_string(i) + " has wrong objective count");
        if (!all_finite(ys[i]))
            throw EvaluationError(problem.name + ": row " + std::to_string(i) + " is not finite");
    }
    return ys;
}

BatchEvaluator chunked_evaluator(std::function<Vector(std::span<const double>)> point_fn, std::size_t chunk) {
    if (chunk == 0) chunk = 1;
    return [fn = std::move(point_fn), chunk](std::span<const Vector> xs) {
        std::vector<Vector> ys(xs.size());
        const std::size_t chunks = (xs.size() + chunk - 1) / chunk;
        parallel_for(chunks, [&](std::size_t c) {
            const std::size_t end = std::min(xs.size(), (c + 1) * chunk);
            for (std::size_t i = c * chunk; i < end; ++i) ys[i] = fn(xs[i]);
        });
        return ys;
    };
}

// ---------------------------------------------------------------------------

Vector zdt_point(int variant, std::span<const double> x) {
    const std::size_t n = x.size();
    const double f1 = x[0];
    double tail = 0.0;
    for (std::size_t i = 1; i < n; ++i) tail += x[i];
    const double g = 1.0 + 9.0 * tail / static_cast<double>(n - 1);
    const double r = f1 / g;
    double h = 0.0;
    switch (variant) {
        case 1: h = 1.0 - std::sqrt(r); break;
        case 2: h = 1.0 - r * r; break;
        case 3: h = 1.0 - std::sqrt(r) - r * std::sin(10.0 * std::numbers::pi * f1); break;
        default: throw ArgumentError("unknown ZDT variant " + std::to_string(variant));
    }
    return {f1, g * h};
}

ProblemDefinition zdt_suite(int variant, std::size_t n) {
    if (variant < 1 || variant > 3) throw ArgumentError("ZDT variant must be 1, 2 or 3");
    if (n < 2) throw ArgumentError("ZDT requires n >= 2");
    ProblemDefinition p{
        .name = "zdt" + std::to_string(variant),
        .space = DesignSpace::unit(n),
        .num_objectives = 2,
        .directions = {Direction::Minimize, Direction::Minimize},
        .evaluator = chunked_evaluator([variant](std::span<const double> x) { return zdt_point(variant, x); }),
    };
    return p;
}

Vector dtlz_point(int variant, std::span<const double> x, std::size_t m) {
    using std::numbers::pi;
    const std::size_t n = x.size();
    double g = 0.0;
    if (variant == 1) {
        const double k = static_cast<double>(n - m + 1);
        double s = 0.0;
        for (std::size_t i = m - 1; i < n; ++i) {
            const double d = x[i] - 0.5;
            s += d * d - std::cos(20.0 * pi * d);
        }
        g = 100.0 * (k + s);
        Vector f(m);
        for (std::size_t obj = 0; obj < m; ++obj) {
            double v = 0.5 * (1.0 + g);
            const std::size_t nprod = m - 1 - obj;
            for (std::size_t j = 0; j < nprod; ++j) v *= x[j];
            if (obj > 0) v *= 1.0 - x[nprod];
            f[obj] = v;
        }
        return f;
    }
    if (variant == 4) {
        constexpr double alpha = 100.0;
        for (std::size_t i = m - 1; i < n; ++i) {
            const double d = x[i] - 0.5;
            g += d * d;
        }
        Vector f(m);
        for (std::size_t obj = 0; obj < m; ++obj) {
            double v = 1.0 + g;
            const std::size_t ncos = m - 1 - obj;
            for (std::size_t j = 0; j < ncos; ++j) v *= std::cos(std::pow(x[j], alpha) * pi / 2.0);
            if (obj > 0) v *= std::sin(std::pow(x[ncos], alpha) * pi / 2.0);
            f[obj] = v;
        }
        return f;
    }
    throw ArgumentError("unknown DTLZ variant " + std::to_string(variant));
}

ProblemDefinition dtlz_suite(int variant, std::size_t n, std::size_t m) {
    if (variant != 1 && variant != 4) throw ArgumentError("DTLZ variant must be 1 or 4");
    if (m < 2) throw ArgumentError("DTLZ requires at least two objectives");
    if (n < m) throw ArgumentError("DTLZ requires n >= M");
    return ProblemDefinition{
        .name = "dtlz" + std::to_string(variant),
        .space = DesignSpace::unit(n),
        .num_objectives = m,
        .directions = std::vector<Direction>(m, Direction::Minimize),
        .evaluator = chunked_evaluator([variant, m](std::span<const double> x) { return dtlz_point(variant, x, m); }),
    };
}

// ---------------------------------------------------------------------------

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

class ExternalProcess {
public:
    ExternalProcess(std::string command, std::filesystem::path workdir, std::size_t dim, std::size_t m)
        : command_(std::move(command)), workdir_(std::move(workdir)), dim_(dim), m_(m) {}

    std::vector<Vector> operator()(std::span<const Vector> xs) {
        std::lock_guard lock(mutex_);
        std::filesystem::create_directories(workdir_);
        const auto tag = "batch_" + std::to_string(counter_++);
        const auto in = std::filesystem::absolute(workdir_ / (tag + "_in.csv"));
        const auto out = std::filesystem::absolute(workdir_ / (tag + "_out.csv"));
        const auto err = std::filesystem::absolute(workdir_ / (tag + "_stderr.txt"));
        std::filesystem::remove(out);
        {
            std::ofstream os(in, std::ios::binary);
            for (std::size_t i = 0; i < dim_; ++i) os << (i ? "," : "") << "x_" << i;
            os << '\n';
            for (const auto& x : xs) {
                for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << format_double(x[i]);
                os << '\n';
            }
            if (!os) throw EvaluationError("external NFP: cannot write " + in.string());
        }
        const std::string cmd = "cd " + shell_quote(workdir_.string()) + " && " + command_ + " --in " +
                                shell_quote(in.string()) + " --out " + shell_quote(out.string()) + " 2> " +
                                shell_quote(err.string());
        const int status = std::system(cmd.c_str());
        const int code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
        if (code != 0)
            throw EvaluationError("external NFP '" + command_ + "' exited with code " + std::to_string(code) +
                                  "; stderr: " + read_file(err));
        return parse_output(out, xs.size(), err);
    }

private:
    std::vector<Vector> parse_output(const std::filesystem::path& out, std::size_t rows,
                                     const std::filesystem::path& err) const {
        std::ifstream is(out, std::ios::binary);
        if (!is) throw EvaluationError("external NFP wrote no output file; stderr: " + read_file(err));
        std::string line;
        if (!std::getline(is, line)) throw EvaluationError("external NFP output is empty");
        std::vector<Vector> ys;
        while (std::getline(is, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            Vector y;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) {
                char* end = nullptr;
                const double v = std::strtod(cell.c_str(), &end);
                if (end == cell.c_str())
                    throw EvaluationError("external NFP output row " + std::to_string(ys.size()) +
                                          " is malformed: '" + line + "'");
                y.push_back(v);
            }
            if (y.size() != m_)
                throw EvaluationError("external NFP output row " + std::to_string(ys.size()) + " has " +
                                      std::to_string(y.size()) + " columns, expected " + std::to_string(m_));
            if (!all_finite(y))
                throw EvaluationError("external NFP output row " + std::to_string(ys.size()) +
                                      " contains a non-finite value");
            ys.push_back(std::move(y));
        }
        if (ys.size() != rows)
            throw EvaluationError("external NFP returned " + std::to_string(ys.size()) + " rows for " +
                                  std::to_string(rows) + " designs; stderr: " + read_file(err));
        return ys;
    }

    std::string command_;
    std::filesystem::path workdir_;
    std::size_t dim_;
    std::size_t m_;
    std::mutex mutex_;
    std::size_t counter_ = 0;
};

}  // namespace

ProblemDefinition external_nfp(const std::string& command, const std::filesystem::path& workdir, DesignSpace space,
                               std::size_t num_objectives, std::vector<Direction> directions) {
    if (command.empty()) throw ArgumentError("external NFP command is empty");
    if (num_objectives < 2) throw ArgumentError("external NFP needs at least two objectives");
    if (directions.empty()) directions.assign(num_objectives, Direction::Minimize);
    if (directions.size() != num_objectives) throw ArgumentError("external NFP direction count mismatch");
    auto proc = std::make_shared<ExternalProcess>(command, workdir, space.dim(), num_objectives);
    return ProblemDefinition{
        .name = "external",
        .space = std::move(space),
        .num_objectives = num_objectives,
        .directions = std::move(directions),
        .evaluator = [proc](std::span<const Vector> xs) { return (*proc)(xs); },
    };
}

std::vector<ProblemInfo> builtin_problems() {
    return {
        {"zdt1", "ZDT1, 2 objectives, convex front, [0,1]^n"},
        {"zdt2", "ZDT2, 2 objectives, concave front, [0,1]^n"},
        {"zdt3", "ZDT3, 2 objectives, disconnected front, [0,1]^n"},
        {"dtlz1", "DTLZ1, M objectives, linear front, [0,1]^n"},
        {"dtlz4", "DTLZ4 (alpha=100), M objectives, spherical front, [0,1]^n"},
        {"external", "subprocess NFP speaking the CSV --in/--out protocol"},
    };
}

}  // namespace lbnmobo
