#pragma once

// Candidate scans over integer boxes. Central norms are first evaluated in
// double precision; only indices that can matter are returned for MPFR rechecks.

#include <cstdint>
#include <vector>

#include "sunit/centralnorm.hpp"

namespace sunit {

constexpr double kScanMargin = 1e-9;

std::vector<std::vector<double>> to_double_rows(const std::vector<RealVec>& w);

class BoxScan {
public:
    // Coordinate t ranges over [lo[t], hi[t]]; coordinate 0 is most significant.
    BoxScan(std::vector<long> lo, std::vector<long> hi);

    // Saturates at UINT64_MAX.
    std::uint64_t size() const { return size_; }
    std::vector<long long> digits(std::uint64_t idx) const;
    static RealVec combine(const std::vector<RealVec>& w, const std::vector<long long>& a);

    // Ascending indices whose double norm is within the margin of the box minimum.
    std::vector<std::uint64_t> shortlist_min(const std::vector<std::vector<double>>& wd, unsigned threads) const;
    // Ascending indices whose double norm is below bound plus the margin.
    std::vector<std::uint64_t> shortlist_below(const std::vector<std::vector<double>>& wd, double bound,
                                               unsigned threads) const;

private:
    template <class Fn>
    void run(const std::vector<std::vector<double>>& wd, unsigned threads, Fn&& fn) const;

    std::vector<long> lo_, hi_;
    std::vector<std::uint64_t> stride_;
    std::uint64_t size_ = 1;
};

}  // namespace sunit
