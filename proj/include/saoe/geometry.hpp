#pragma once

#include <algorithm>
#include <cmath>

namespace saoe {

// Axis-aligned box, image convention: origin top-left, y grows downward.
struct Box {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return std::max(0.0, width()) * std::max(0.0, height()); }
    double cx() const { return 0.5 * (x1 + x2); }
    double cy() const { return 0.5 * (y1 + y2); }
    double diagonal() const { return std::hypot(width(), height()); }

    bool valid() const {
        return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
               std::isfinite(y2) && x1 <= x2 && y1 <= y2;
    }
    bool positive_area() const { return valid() && x1 < x2 && y1 < y2; }

    // Scale width and height by `factor` about the box center.
    Box scaled(double factor) const {
        const double hw = 0.5 * width() * factor;
        const double hh = 0.5 * height() * factor;
        return {cx() - hw, cy() - hh, cx() + hw, cy() + hh};
    }

    bool contains(double px, double py) const {
        return px >= x1 && px <= x2 && py >= y1 && py <= y2;
    }

    friend bool operator==(const Box& a, const Box& b) {
        return a.x1 == b.x1 && a.y1 == b.y1 && a.x2 == b.x2 && a.y2 == b.y2;
    }
};

inline double iou(const Box& a, const Box& b) {
    const double ix = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
    const double iy = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

}  // namespace saoe
