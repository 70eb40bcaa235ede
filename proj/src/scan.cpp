#include "scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "sunit/errors.hpp"

namespace sunit {

namespace {

double central_norm_d(std::vector<double>& x) {
    const std::size_t l = (x.size() + 1) / 2 - 1;
    std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(l), x.end());
    const double c = x[l];
    double s = 0;
    for (double v : x) s += std::fabs(v - c);
    return s;
}

unsigned resolve_threads(unsigned threads, std::uint64_t work) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (work < 4096) threads = 1;
    return threads;
}

}  // namespace

std::vector<std::vector<double>> to_double_rows(const std::vector<RealVec>& w) {
    std::vector<std::vector<double>> out;
    for (const auto& row : w) {
        std::vector<double> r;
        for (const auto& v : row) r.push_back(v.to_double());
        out.push_back(std::move(r));
    }
    return out;
}

BoxScan::BoxScan(std::vector<long> lo, std::vector<long> hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    require(lo_.size() == hi_.size() && !lo_.empty(), "scan box dimension mismatch");
    stride_.assign(lo_.size(), 1);
    for (std::size_t t = lo_.size(); t-- > 0;) {
        require(hi_[t] >= lo_[t], "empty scan box");
        stride_[t] = size_;
        const std::uint64_t radix = static_cast<std::uint64_t>(hi_[t] - lo_[t] + 1);
        if (size_ > std::numeric_limits<std::uint64_t>::max() / radix)
            size_ = std::numeric_limits<std::uint64_t>::max();
        else
            size_ *= radix;
    }
}

std::vector<long long> BoxScan::digits(std::uint64_t idx) const {
    std::vector<long long> a(lo_.size());
    for (std::size_t t = 0; t < lo_.size(); ++t) {
        a[t] = lo_[t] + static_cast<long long>(idx / stride_[t]);
        idx %= stride_[t];
    }
    return a;
}

RealVec BoxScan::combine(const std::vector<RealVec>& w, const std::vector<long long>& a) {
    RealVec row(w[0].size(), Real(0));
    for (std::size_t t = 0; t < w.size(); ++t) {
        if (a[t] == 0) continue;
        Real c(a[t]);
        for (std::size_t x = 0; x < row.size(); ++x) row[x] += c * w[t][x];
    }
    return row;
}

template <class Fn>
void BoxScan::run(const std::vector<std::vector<double>>& wd, unsigned threads, Fn&& fn) const {
    require(size_ != std::numeric_limits<std::uint64_t>::max(), "scan box too large");
    const unsigned nt = resolve_threads(threads, size_);
    const std::size_t k = lo_.size(), s = wd[0].size();
    auto worker = [&](unsigned part) {
        const std::uint64_t begin = size_ * part / nt, end = size_ * (part + 1) / nt;
        if (begin >= end) return;
        std::vector<long long> a = digits(begin);
        std::vector<double> row(s);
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            std::fill(row.begin(), row.end(), 0.0);
            for (std::size_t t = 0; t < k; ++t) {
                if (a[t] == 0) continue;
                const double c = static_cast<double>(a[t]);
                for (std::size_t x = 0; x < s; ++x) row[x] += c * wd[t][x];
            }
            fn(part, idx, central_norm_d(row));
            for (std::size_t t = k; t-- > 0;) {
                if (a[t] < hi_[t]) {
                    ++a[t];
                    break;
                }
                a[t] = lo_[t];
            }
        }
    };
    if (nt == 1) {
        worker(0);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned p = 0; p < nt; ++p) pool.emplace_back(worker, p);
    for (auto& th : pool) th.join();
}

std::vector<std::uint64_t> BoxScan::shortlist_min(const std::vector<std::vector<double>>& wd, unsigned threads) const {
    const unsigned nt = resolve_threads(threads, size_);
    std::vector<double> mins(nt, std::numeric_limits<double>::infinity());
    run(wd, threads, [&](unsigned part, std::uint64_t, double v) { mins[part] = std::min(mins[part], v); });
    const double mn = *std::min_element(mins.begin(), mins.end());
    return shortlist_below(wd, mn, threads);
}

std::vector<std::uint64_t> BoxScan::shortlist_below(const std::vector<std::vector<double>>& wd, double bound,
                                                    unsigned threads) const {
    const unsigned nt = resolve_threads(threads, size_);
    const double cut = bound + kScanMargin * (1.0 + std::fabs(bound));
    std::vector<std::vector<std::uint64_t>> parts(nt);
    run(wd, threads, [&](unsigned part, std::uint64_t idx, double v) {
        if (v <= cut) parts[part].push_back(idx);
    });
    std::vector<std::uint64_t> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

}  // namespace sunit
