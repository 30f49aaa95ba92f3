#pragma once

#include <map>
#include <vector>

#include "legknot/diagram.hpp"

namespace legknot {

struct BandEnd {
    int band = 0;       // arrow id
    bool head = false;  // the end sitting at the arrow head
};

/// One disk with a band per arrow. Band ends are listed in boundary order.
struct RibbonSurface {
    std::vector<BandEnd> band_end_order;
    std::vector<bool> twisted;  // per band id (index 0 unused)

    int band_count() const { return static_cast<int>(band_end_order.size() / 2); }
};

/// Disk-band surface of a virtual string: bands attached untwisted in the
/// order of the core circle.
inline RibbonSurface realize_surface(const FlatVirtualString& s) {
    validate(s);
    RibbonSurface r;
    for (const Site& site : s.sites()) r.band_end_order.push_back({site.id, site.is_head()});
    r.twisted.assign(static_cast<std::size_t>(s.arrow_count()) + 1, false);
    return r;
}

namespace detail {

inline std::vector<int> band_partner(const RibbonSurface& r) {
    const std::size_t n = r.band_end_order.size();
    std::vector<int> mu(n, -1);
    std::map<int, int> first;
    for (std::size_t i = 0; i < n; ++i) {
        const int b = r.band_end_order[i].band;
        auto it = first.find(b);
        if (it == first.end()) {
            first[b] = static_cast<int>(i);
        } else {
            mu[i] = it->second;
            mu[static_cast<std::size_t>(it->second)] = static_cast<int>(i);
        }
    }
    for (int m : mu) {
        if (m < 0) throw Error(ErrorCode::UnpairedArrow, "band with a single end");
    }
    return mu;
}

} // namespace detail

/// Boundary circles: cycles of i -> partner(i) + 1 over band-end slots.
inline int boundary_components(const RibbonSurface& r) {
    for (std::size_t b = 1; b < r.twisted.size(); ++b) {
        if (r.twisted[b]) throw Error(ErrorCode::NonOrientableDetected, "twisted band", static_cast<long>(b));
    }
    const auto mu = detail::band_partner(r);
    const std::size_t n = mu.size();
    if (n == 0) return 1;
    std::vector<bool> seen(n, false);
    int cycles = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (seen[i]) continue;
        ++cycles;
        std::size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = (static_cast<std::size_t>(mu[j]) + 1) % n;
        }
    }
    return cycles;
}

/// g = (2 - chi - b) / 2 with chi = 1 - bands.
inline int surface_genus(const RibbonSurface& r) {
    const int b = boundary_components(r);
    const int twice = 1 + r.band_count() - b;
    if (twice < 0 || twice % 2 != 0) throw Error(ErrorCode::NonOrientableDetected, "odd Euler count");
    return twice / 2;
}

/// Reads the string back off the core circle of the surface.
inline FlatVirtualString core_string(const RibbonSurface& r) {
    std::vector<Site> sites;
    for (const auto& e : r.band_end_order) sites.push_back(e.head ? Site::head(e.band) : Site::tail(e.band));
    return FlatVirtualString(std::move(sites));
}

inline int genus(const FlatVirtualString& s) { return surface_genus(realize_surface(s)); }

} // namespace legknot
