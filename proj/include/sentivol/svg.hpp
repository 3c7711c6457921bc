#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sentivol::svg {

struct Line {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
    bool markers = false;
};

struct Panel {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Line> lines;
};

/// Grid of line-chart panels, filled row by row.
struct Figure {
    std::string title;
    int columns = 1;
    int panel_width = 320;
    int panel_height = 220;
    std::vector<Panel> panels;
    std::string footer;
    /// Emitted as an XML comment at the top of the document.
    std::vector<std::pair<std::string, std::string>> metadata;
};

/// Standalone SVG document; output depends only on the figure contents.
std::string render(const Figure& figure);

} // namespace sentivol::svg
