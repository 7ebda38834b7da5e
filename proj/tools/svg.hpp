#pragma once

#include <string>
#include <vector>

namespace chankit::svg {

struct Series {
    std::string label;
    std::string css_class; // "points" draws circles, anything else a polyline
    std::vector<std::pair<double, double>> xy;
};

struct Panel {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    std::vector<Series> series;
};

// Panels stacked vertically, each with its own axes and tick labels.
std::string render(const std::vector<Panel>& panels);

} // namespace chankit::svg
