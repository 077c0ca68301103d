#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "conesphere/arrangement.hpp"
#include "conesphere/decomposition.hpp"
#include "conesphere/developing.hpp"

namespace conesphere {

// Canonical text: sorted keys, two-space indent, reals with 17 significant
// digits, locale independent.
std::string dump_canonical(const nlohmann::json& j);
std::string format_real(double x);

// Parses JSON and throws ParseFailure with a line and column.  Schema errors
// found later can be positioned with `locate`.
class Document {
public:
    explicit Document(std::string text);

    const nlohmann::json& root() const { return root_; }
    // Position of the value at a JSON pointer, falling back to its parent.
    std::pair<std::size_t, std::size_t> locate(const std::string& pointer) const;
    [[noreturn]] void fail(const std::string& pointer, const std::string& reason) const;

private:
    std::string text_;
    nlohmann::json root_;
    std::map<std::string, std::size_t> offsets_;
};

nlohmann::json arrangement_to_json(const LoopArrangement& arr);
LoopArrangement arrangement_from_json(const Document& doc, const nlohmann::json& j, const std::string& pointer);

LoopArrangement parse_arrangement(const std::string& text);
std::string serialize_arrangement(const LoopArrangement& arr);

nlohmann::json frame_to_json(const FrameSpec& spec);
FrameSpec frame_from_json(const Document& doc, const nlohmann::json& j, const std::string& pointer);
FrameSpec parse_frame_spec(const std::string& text);
std::string serialize_frame_spec(const FrameSpec& spec);

struct Surface {
    std::optional<LoopArrangement> arrangement; // inline, if present
    std::optional<std::string> arrangement_file;
    std::map<std::string, double> lengths;
};

Surface parse_surface(const std::string& text);
std::string serialize_surface(const Surface& s);

std::vector<Bipartition> parse_bipartitions(const Document& doc, const nlohmann::json& j, const std::string& pointer);

struct CatalogEntry {
    std::string name;
    std::vector<Bipartition> spec;
    LoopArrangement arrangement;
    FrameSpec frame;
    std::vector<VertexLabel> frame_chain; // labeled vertices the frame joins
    int det_sign = 0;
    std::string note;
};

// Adjacent pair with frames that agree away from the changed loop.
struct CatalogPair {
    std::string a;
    std::string b;
    std::string loop;
    FrameSpec frame_a;
    FrameSpec frame_b;
    Side expected = Side::DifferentSide;
    std::string note;
};

struct ProjectFile {
    int version = 1;
    std::string name;
    std::vector<CatalogEntry> entries;
    std::vector<CatalogPair> pairs;

    const CatalogEntry& entry(const std::string& name) const;
};

ProjectFile parse_project(const std::string& text);
std::string serialize_project(const ProjectFile& p);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

} // namespace conesphere
