#include "lbnmobo/core.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace lbnmobo {

std::string_view to_string(Direction d) { return d == Direction::Maximize ? "max" : "min"; }

Direction parse_direction(std::string_view s) {
    if (s == "min" || s == "minimize") return Direction::Minimize;
    if (s == "max" || s == "maximize") return Direction::Maximize;
    throw ArgumentError("unknown objective direction '" + std::string(s) + "'");
}

Vector to_minimize(std::span<const double> y, std::span<const Direction> dirs) {
    if (y.size() != dirs.size()) throw ArgumentError("objective/direction length mismatch");
    Vector out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = to_minimize(y[i], dirs[i]);
    return out;
}

// ---------------------------------------------------------------------------

DesignSpace::DesignSpace(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty()) throw ArgumentError("design space must have at least one dimension");
    if (lower_.size() != upper_.size()) throw ArgumentError("lower/upper bound length mismatch");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || !(lower_[i] < upper_[i]))
            throw ArgumentError("design space bound " + std::to_string(i) + " requires finite lower < upper");
    }
}

DesignSpace DesignSpace::unit(std::size_t dim) { return DesignSpace(Vector(dim, 0.0), Vector(dim, 1.0)); }

bool DesignSpace::contains(std::span<const double> x) const {
    if (x.size() != dim()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
    return true;
}

void DesignSpace::clip(std::span<double> x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower_[i], upper_[i]);
}

// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t SeedTree::seed(std::string_view label, std::uint64_t index) const {
    std::uint64_t h = splitmix64(master_);
    h = splitmix64(h ^ fnv1a64(label));
    return splitmix64(h ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

std::vector<Vector> uniform_sample(const DesignSpace& space, std::size_t count, std::uint64_t seed) {
    if (count == 0) throw ArgumentError("uniform_sample: count must be >= 1");
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vector> out(count, Vector(space.dim()));
    for (auto& x : out) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            double v = space.lower()[i] + unit(rng) * (space.upper()[i] - space.lower()[i]);
            x[i] = std::min(v, space.upper()[i]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
}

std::size_t hash_design(std::span<const double> x) {
    std::uint64_t h = 0x84222325CBF29CE4ULL;
    for (double d : x) {
        if (d == 0.0) d = 0.0;
        h = splitmix64(h ^ std::bit_cast<std::uint64_t>(d));
    }
    return static_cast<std::size_t>(h);
}

std::size_t Dataset::DesignHash::operator()(const Vector& v) const { return hash_design(v); }

Dataset::Dataset(std::size_t dim, std::vector<Direction> directions)
    : dim_(dim), directions_(std::move(directions)) {
    if (dim_ == 0) throw ArgumentError("dataset dimension must be >= 1");
    if (directions_.size() < 2) throw ArgumentError("datasets need at least two objectives");
}

bool Dataset::contains(std::span<const double> x) const {
    return index_.contains(Vector(x.begin(), x.end()));
}

Dataset::AppendResult Dataset::append(std::span<const Vector> xs, std::span<const Vector> ys, int iteration) {
    if (xs.size() != ys.size())
        throw ArgumentError("dataset append: " + std::to_string(xs.size()) + " designs but " +
                            std::to_string(ys.size()) + " performances");
    AppendResult r;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i].size() != dim_) throw ArgumentError("dataset append: design dimension mismatch");
        if (ys[i].size() != num_objectives())
            throw ArgumentError("dataset append: performance dimension mismatch");
        if (!all_finite(ys[i]) || !all_finite(xs[i])) {
            ++r.non_finite;
            continue;
        }
        if (!index_.insert(xs[i]).second) {
            ++r.duplicates;
            continue;
        }
        designs_.push_back(xs[i]);
        performances_.push_back(ys[i]);
        iterations_.push_back(iteration);
        ++r.accepted;
    }
    return r;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Dataset::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < dim_; ++i) os << "x_" << i << ',';
    for (std::size_t m = 0; m < num_objectives(); ++m) os << "y_" << m << ',';
    os << "iteration\n";
    for (std::size_t r = 0; r < size(); ++r) {
        for (double v : designs_[r]) os << format_double(v) << ',';
        for (double v : performances_[r]) os << format_double(v) << ',';
        os << iterations_[r] << '\n';
    }
}

void Dataset::save_csv(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    write_csv(os);
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        // from_chars rejects "inf"/"nan" spellings produced by some tools; fall back to strtod.
        std::string tmp(s);
        char* end = nullptr;
        v = std::strtod(tmp.c_str(), &end);
        if (tmp.empty() || end != tmp.c_str() + tmp.size())
            throw LoadError("malformed number '" + tmp + "'");
    }
    return v;
}

}  // namespace

Dataset Dataset::read_csv(std::istream& is, std::vector<Direction> directions) {
    std::string line;
    if (!std::getline(is, line)) throw LoadError("dataset csv: missing header");
    auto header = split_commas(line);
    const std::size_t m = directions.size();
    if (header.size() < m + 2 || header.back().substr(0, 9) != "iteration")
        throw LoadError("dataset csv: unexpected header");
    const std::size_t dim = header.size() - m - 1;
    Dataset ds(dim, std::move(directions));
    std::size_t row = 0;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        auto cells = split_commas(line);
        if (cells.size() != header.size())
            throw LoadError("dataset csv: row " + std::to_string(row) + " has wrong column count");
        Vector x(dim), y(m);
        for (std::size_t i = 0; i < dim; ++i) x[i] = parse_double(cells[i]);
        for (std::size_t j = 0; j < m; ++j) y[j] = parse_double(cells[dim + j]);
        int it = static_cast<int>(parse_double(cells.back()));
        auto r = ds.append(std::span(&x, 1), std::span(&y, 1), it);
        if (r.accepted != 1) throw LoadError("dataset csv: row " + std::to_string(row) + " is invalid");
    }
    return ds;
}

Dataset Dataset::load_csv(const std::filesystem::path& path, std::vector<Direction> directions) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw LoadError("cannot open " + path.string());
    return read_csv(is, std::move(directions));
}

// ---------------------------------------------------------------------------

namespace {
std::atomic<unsigned> g_max_threads{0};
thread_local bool t_in_worker = false;
}  // namespace

void set_max_threads(unsigned n) { g_max_threads = n; }

unsigned max_threads() {
    unsigned n = g_max_threads.load();
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(max_threads(), count);
    if (workers <= 1 || t_in_worker) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = count * w / workers;
            const std::size_t end = count * (w + 1) / workers;
            pool.emplace_back([&, begin, end] {
                t_in_worker = true;
                try {
                    for (std::size_t i = begin; i < end; ++i) fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace lbnmobo
