#pragma once

#include <string>
#include <vector>

#include "conesphere/developing.hpp"

namespace conesphere {

struct SvgOptions {
    double width = 800.0; // pixels; height follows the aspect ratio
    bool labels = true;
    bool legend = true;
};

std::string export_svg(const DevelopedComplex& dev, const SvgOptions& options = {});
std::string export_obj(const DevelopedComplex& dev);

struct ObjMesh {
    std::vector<Vec3> vertices;
    std::vector<std::vector<std::size_t>> faces; // 0-based
};

ObjMesh parse_obj(const std::string& text);
double planar_area(const ObjMesh& mesh);

} // namespace conesphere
