#include "conesphere/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace conesphere {

using nlohmann::json;

std::string format_real(double x)
{
    if (!std::isfinite(x)) throw Error(ErrorCode::ValidationError, "cannot serialize a non-finite real");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

bool is_scalar(const json& j) { return !j.is_object() && !j.is_array(); }

void write(std::ostringstream& os, const json& j, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    if (j.is_number_float()) {
        os << format_real(j.get<double>());
    } else if (j.is_object()) {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) os << ",\n";
            first = false;
            os << pad << json(it.key()).dump() << ": ";
            write(os, it.value(), indent + 2);
        }
        os << "\n" << close << "}";
    } else if (j.is_array()) {
        if (j.empty()) {
            os << "[]";
            return;
        }
        bool flat = std::all_of(j.begin(), j.end(), is_scalar);
        if (flat) {
            os << "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ", ";
                write(os, j[i], indent);
            }
            os << "]";
            return;
        }
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) os << ",\n";
            os << pad;
            write(os, j[i], indent + 2);
        }
        os << "\n" << close << "]";
    } else {
        os << j.dump();
    }
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset)
{
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

std::string escape_pointer(const std::string& key)
{
    std::string out;
    for (char c : key) {
        if (c == '~')
            out += "~0";
        else if (c == '/')
            out += "~1";
        else
            out += c;
    }
    return out;
}

// Walks text that nlohmann already accepted and records where each value
// starts.
class Scanner {
public:
    Scanner(const std::string& text, std::map<std::string, std::size_t>& out) : t_(text), out_(out) {}

    void value(const std::string& pointer)
    {
        ws();
        out_[pointer] = i_;
        if (i_ >= t_.size()) return;
        char c = t_[i_];
        if (c == '{') {
            ++i_;
            ws();
            if (peek() == '}') {
                ++i_;
                return;
            }
            for (;;) {
                ws();
                std::string key = string();
                ws();
                ++i_; // ':'
                value(pointer + "/" + escape_pointer(key));
                ws();
                if (peek() == ',') {
                    ++i_;
                    continue;
                }
                ++i_; // '}'
                return;
            }
        }
        if (c == '[') {
            ++i_;
            ws();
            if (peek() == ']') {
                ++i_;
                return;
            }
            for (std::size_t n = 0;; ++n) {
                value(pointer + "/" + std::to_string(n));
                ws();
                if (peek() == ',') {
                    ++i_;
                    continue;
                }
                ++i_; // ']'
                return;
            }
        }
        if (c == '"') {
            string();
            return;
        }
        while (i_ < t_.size() && std::string_view(",]} \t\r\n").find(t_[i_]) == std::string_view::npos) ++i_;
    }

private:
    char peek() const { return i_ < t_.size() ? t_[i_] : '\0'; }
    void ws()
    {
        while (i_ < t_.size() && std::string_view(" \t\r\n").find(t_[i_]) != std::string_view::npos) ++i_;
    }
    std::string string()
    {
        std::size_t start = i_;
        ++i_;
        while (i_ < t_.size() && t_[i_] != '"') i_ += t_[i_] == '\\' ? 2 : 1;
        ++i_;
        return json::parse(t_.substr(start, i_ - start)).get<std::string>();
    }

    const std::string& t_;
    std::map<std::string, std::size_t>& out_;
    std::size_t i_ = 0;
};

const json& member(const Document& doc, const json& j, const std::string& pointer, const std::string& key)
{
    if (!j.is_object()) doc.fail(pointer, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) doc.fail(pointer, "missing key \"" + key + "\"");
    return *it;
}

double real(const Document& doc, const json& j, const std::string& pointer)
{
    if (!j.is_number()) doc.fail(pointer, "expected a number");
    return j.get<double>();
}

std::size_t index(const Document& doc, const json& j, const std::string& pointer)
{
    if (!j.is_number_unsigned()) doc.fail(pointer, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

std::string string_at(const Document& doc, const json& j, const std::string& pointer)
{
    if (!j.is_string()) doc.fail(pointer, "expected a string");
    return j.get<std::string>();
}

const json& array(const Document& doc, const json& j, const std::string& pointer)
{
    if (!j.is_array()) doc.fail(pointer, "expected an array");
    return j;
}

Vec3 vec3(const Document& doc, const json& j, const std::string& pointer)
{
    array(doc, j, pointer);
    if (j.size() != 3) doc.fail(pointer, "expected three coordinates");
    return {real(doc, j[0], pointer + "/0"), real(doc, j[1], pointer + "/1"), real(doc, j[2], pointer + "/2")};
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

void require_valid(const LoopArrangement& arr)
{
    auto report = validate(arr);
    if (report.ok()) return;
    std::string msg;
    for (const auto& issue : report.issues) {
        if (!msg.empty()) msg += "; ";
        msg += to_string(issue.kind) + ": " + issue.detail;
    }
    throw Error(ErrorCode::ValidationError, msg);
}

VertexLabel label_of(const Document& doc, const json& j, const std::string& pointer)
{
    auto label = parse_vertex_label(string_at(doc, j, pointer));
    if (!label) doc.fail(pointer, "expected a vertex label such as 2+");
    return *label;
}

} // namespace

std::string dump_canonical(const json& j)
{
    std::ostringstream os;
    write(os, j, 0);
    os << "\n";
    return os.str();
}

Document::Document(std::string text) : text_(std::move(text))
{
    try {
        root_ = json::parse(text_);
    } catch (const json::parse_error& e) {
        std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
        auto [line, column] = line_column(text_, offset);
        std::string reason = e.what();
        auto pos = reason.find("syntax error");
        throw ParseFailure(line, column, pos == std::string::npos ? reason : reason.substr(pos));
    }
    Scanner(text_, offsets_).value("");
}

std::pair<std::size_t, std::size_t> Document::locate(const std::string& pointer) const
{
    std::string p = pointer;
    for (;;) {
        auto it = offsets_.find(p);
        if (it != offsets_.end()) return line_column(text_, it->second);
        if (p.empty()) return {1, 1};
        p = p.substr(0, p.rfind('/'));
    }
}

void Document::fail(const std::string& pointer, const std::string& reason) const
{
    auto [line, column] = locate(pointer);
    throw ParseFailure(line, column, (pointer.empty() ? std::string("/") : pointer) + ": " + reason);
}

json arrangement_to_json(const LoopArrangement& arr)
{
    json j;
    j["n_pairs"] = arr.n_pairs();
    j["vertices"] = json::array();
    for (const auto& p : arr.vertices.positions) j["vertices"].push_back(vec_json(p));
    j["deficits"] = arr.deficits;
    j["loops"] = json::array();
    for (const auto& loop : arr.loops) j["loops"].push_back({{"label", loop.label}, {"normal", vec_json(loop.normal)}});
    return j;
}

LoopArrangement arrangement_from_json(const Document& doc, const json& j, const std::string& pointer)
{
    LoopArrangement arr;
    std::size_t n = index(doc, member(doc, j, pointer, "n_pairs"), pointer + "/n_pairs");
    const json& vs = array(doc, member(doc, j, pointer, "vertices"), pointer + "/vertices");
    if (vs.size() != n) doc.fail(pointer + "/vertices", "expected " + std::to_string(n) + " vertices");
    for (std::size_t i = 0; i < vs.size(); ++i)
        arr.vertices.positions.push_back(vec3(doc, vs[i], pointer + "/vertices/" + std::to_string(i)));
    const json& ds = array(doc, member(doc, j, pointer, "deficits"), pointer + "/deficits");
    for (std::size_t i = 0; i < ds.size(); ++i)
        arr.deficits.push_back(real(doc, ds[i], pointer + "/deficits/" + std::to_string(i)));
    const json& ls = array(doc, member(doc, j, pointer, "loops"), pointer + "/loops");
    for (std::size_t i = 0; i < ls.size(); ++i) {
        std::string p = pointer + "/loops/" + std::to_string(i);
        arr.loops.push_back({string_at(doc, member(doc, ls[i], p, "label"), p + "/label"),
                             vec3(doc, member(doc, ls[i], p, "normal"), p + "/normal")});
    }
    return arr;
}

LoopArrangement parse_arrangement(const std::string& text)
{
    Document doc(text);
    LoopArrangement arr = arrangement_from_json(doc, doc.root(), "");
    require_valid(arr);
    return arr;
}

std::string serialize_arrangement(const LoopArrangement& arr) { return dump_canonical(arrangement_to_json(arr)); }

json frame_to_json(const FrameSpec& spec)
{
    json j = json::array();
    for (const auto& e : spec) j.push_back({{"from", e.from}, {"to", e.to}, {"path", e.path}});
    return j;
}

FrameSpec frame_from_json(const Document& doc, const json& j, const std::string& pointer)
{
    FrameSpec spec;
    array(doc, j, pointer);
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = pointer + "/" + std::to_string(i);
        FrameEntry e;
        e.from = index(doc, member(doc, j[i], p, "from"), p + "/from");
        e.to = index(doc, member(doc, j[i], p, "to"), p + "/to");
        const json& path = array(doc, member(doc, j[i], p, "path"), p + "/path");
        for (std::size_t t = 0; t < path.size(); ++t)
            e.path.push_back(index(doc, path[t], p + "/path/" + std::to_string(t)));
        spec.push_back(std::move(e));
    }
    return spec;
}

FrameSpec parse_frame_spec(const std::string& text)
{
    Document doc(text);
    return frame_from_json(doc, doc.root(), "");
}

std::string serialize_frame_spec(const FrameSpec& spec) { return dump_canonical(frame_to_json(spec)); }

Surface parse_surface(const std::string& text)
{
    Document doc(text);
    const json& root = doc.root();
    if (!root.is_object()) doc.fail("", "expected an object");
    Surface s;
    const json* lengths = &root;
    std::string lp;
    if (root.contains("lengths")) {
        lengths = &root["lengths"];
        lp = "/lengths";
        if (root.contains("arrangement")) {
            const json& a = root["arrangement"];
            if (a.is_string()) {
                s.arrangement_file = a.get<std::string>();
            } else {
                s.arrangement = arrangement_from_json(doc, a, "/arrangement");
                require_valid(*s.arrangement);
            }
        }
    }
    if (!lengths->is_object()) doc.fail(lp, "expected an object of lengths");
    for (auto it = lengths->begin(); it != lengths->end(); ++it)
        s.lengths[it.key()] = real(doc, it.value(), lp + "/" + escape_pointer(it.key()));
    return s;
}

std::string serialize_surface(const Surface& s)
{
    json j;
    j["lengths"] = json::object();
    for (const auto& [k, v] : s.lengths) j["lengths"][k] = v;
    if (s.arrangement)
        j["arrangement"] = arrangement_to_json(*s.arrangement);
    else if (s.arrangement_file)
        j["arrangement"] = *s.arrangement_file;
    return dump_canonical(j);
}

std::vector<Bipartition> parse_bipartitions(const Document& doc, const json& j, const std::string& pointer)
{
    std::vector<Bipartition> out;
    array(doc, j, pointer);
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = pointer + "/" + std::to_string(i);
        std::string s = string_at(doc, j[i], p);
        Bipartition b;
        for (char c : s) {
            if (c != '+' && c != '-') doc.fail(p, "bipartitions are strings of + and -");
            b.signs.push_back(c == '+' ? 1 : -1);
        }
        out.push_back(std::move(b));
    }
    return out;
}

const CatalogEntry& ProjectFile::entry(const std::string& wanted) const
{
    for (const auto& e : entries)
        if (e.name == wanted) return e;
    throw Error(ErrorCode::ValidationError, "no catalog entry " + wanted);
}

namespace {

json entry_to_json(const CatalogEntry& e)
{
    json j;
    j["name"] = e.name;
    j["spec"] = json::array();
    for (const auto& b : e.spec) j["spec"].push_back(b.to_string());
    j["arrangement"] = arrangement_to_json(e.arrangement);
    j["frame"] = frame_to_json(e.frame);
    j["frame_chain"] = json::array();
    for (const auto& l : e.frame_chain) j["frame_chain"].push_back(to_string(l));
    j["det_sign"] = e.det_sign;
    j["note"] = e.note;
    return j;
}

json pair_to_json(const CatalogPair& c)
{
    return {{"a", c.a},
            {"b", c.b},
            {"loop", c.loop},
            {"frame_a", frame_to_json(c.frame_a)},
            {"frame_b", frame_to_json(c.frame_b)},
            {"expected", to_string(c.expected)},
            {"note", c.note}};
}

int sign_at(const Document& doc, const json& j, const std::string& pointer)
{
    if (!j.is_number_integer() || (j.get<int>() != 1 && j.get<int>() != -1 && j.get<int>() != 0))
        doc.fail(pointer, "expected -1, 0 or 1");
    return j.get<int>();
}

Side side_at(const Document& doc, const json& j, const std::string& pointer)
{
    std::string s = string_at(doc, j, pointer);
    if (s == "different") return Side::DifferentSide;
    if (s == "same") return Side::SameSide;
    doc.fail(pointer, "expected \"same\" or \"different\"");
}

} // namespace

ProjectFile parse_project(const std::string& source)
{
    Document doc(source);
    const json& root = doc.root();
    ProjectFile p;
    p.version = static_cast<int>(index(doc, member(doc, root, "", "version"), "/version"));
    if (p.version != 1) doc.fail("/version", "unsupported version " + std::to_string(p.version));
    p.name = string_at(doc, member(doc, root, "", "name"), "/name");
    const json& entries = array(doc, member(doc, root, "", "entries"), "/entries");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        std::string at = "/entries/" + std::to_string(i);
        const json& j = entries[i];
        CatalogEntry e;
        e.name = string_at(doc, member(doc, j, at, "name"), at + "/name");
        e.spec = parse_bipartitions(doc, member(doc, j, at, "spec"), at + "/spec");
        e.arrangement = arrangement_from_json(doc, member(doc, j, at, "arrangement"), at + "/arrangement");
        e.frame = frame_from_json(doc, member(doc, j, at, "frame"), at + "/frame");
        const json& chain = array(doc, member(doc, j, at, "frame_chain"), at + "/frame_chain");
        for (std::size_t t = 0; t < chain.size(); ++t)
            e.frame_chain.push_back(label_of(doc, chain[t], at + "/frame_chain/" + std::to_string(t)));
        e.det_sign = sign_at(doc, member(doc, j, at, "det_sign"), at + "/det_sign");
        e.note = string_at(doc, member(doc, j, at, "note"), at + "/note");
        p.entries.push_back(std::move(e));
    }
    const json& pairs = array(doc, member(doc, root, "", "pairs"), "/pairs");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::string at = "/pairs/" + std::to_string(i);
        const json& j = pairs[i];
        CatalogPair c;
        c.a = string_at(doc, member(doc, j, at, "a"), at + "/a");
        c.b = string_at(doc, member(doc, j, at, "b"), at + "/b");
        c.loop = string_at(doc, member(doc, j, at, "loop"), at + "/loop");
        c.frame_a = frame_from_json(doc, member(doc, j, at, "frame_a"), at + "/frame_a");
        c.frame_b = frame_from_json(doc, member(doc, j, at, "frame_b"), at + "/frame_b");
        c.expected = side_at(doc, member(doc, j, at, "expected"), at + "/expected");
        c.note = string_at(doc, member(doc, j, at, "note"), at + "/note");
        p.pairs.push_back(std::move(c));
    }
    return p;
}

std::string serialize_project(const ProjectFile& p)
{
    json j;
    j["version"] = p.version;
    j["name"] = p.name;
    j["entries"] = json::array();
    for (const auto& e : p.entries) j["entries"].push_back(entry_to_json(e));
    j["pairs"] = json::array();
    for (const auto& c : p.pairs) j["pairs"].push_back(pair_to_json(c));
    return dump_canonical(j);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ValidationError, "cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::ValidationError, "cannot write " + path);
    out << contents;
}

} // namespace conesphere
