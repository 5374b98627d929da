#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "forkscope/error.hpp"
#include "forkscope/ingest.hpp"

namespace forkscope {

namespace {

void lowercase(std::string& s, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end && i < s.size(); ++i)
        s[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string normalize_url(std::string_view url) {
    std::string s(url);
    auto scheme_end = s.find("://");
    if (scheme_end != std::string::npos) {
        lowercase(s, 0, scheme_end);
        std::size_t authority = scheme_end + 3;
        std::size_t path = std::min(s.find('/', authority), s.size());
        std::size_t at = s.rfind('@', path);
        std::size_t host = (at != std::string::npos && at >= authority) ? at + 1 : authority;
        lowercase(s, host, path);
    } else {
        auto colon = s.find(':');
        auto slash = s.find('/');
        if (colon != std::string::npos && (slash == std::string::npos || colon < slash)) {
            auto at = s.rfind('@', colon);
            lowercase(s, at == std::string::npos ? 0 : at + 1, colon);
        }
    }
    for (;;) {
        if (ends_with(s, "/")) s.pop_back();
        else if (ends_with(s, ".git")) s.resize(s.size() - 4);
        else break;
    }
    return s;
}

ArtifactId origin_id_for_url(std::string_view url) {
    return ArtifactId::sha1_of(normalize_url(url));
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    std::size_t line = 1;
    std::size_t i = 0;
    bool field_started = false;
    bool at_field_start = true;
    auto end_record = [&] {
        record.push_back(std::move(field));
        field.clear();
        // A lone empty field is a blank line, not a record.
        if (!(record.size() == 1 && record[0].empty() && !field_started)) records.push_back(record);
        record.clear();
        field_started = false;
        at_field_start = true;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '"' && at_field_start) {
            field_started = true;
            at_field_start = false;
            ++i;
            for (;;) {
                if (i >= text.size())
                    throw ParseError(path.string() + ":" + std::to_string(line) +
                                     ": unterminated quoted field");
                if (text[i] == '"') {
                    if (i + 1 < text.size() && text[i + 1] == '"') {
                        field.push_back('"');
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                if (text[i] == '\n') ++line;
                field.push_back(text[i++]);
            }
            if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
                throw ParseError(path.string() + ":" + std::to_string(line) +
                                 ": unexpected character after closing quote");
            continue;
        }
        if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
            field_started = true;
            at_field_start = true;
            ++i;
        } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            end_record();
            i += 2;
            ++line;
        } else if (c == '\n') {
            end_record();
            ++i;
            ++line;
        } else {
            field.push_back(c);
            field_started = true;
            at_field_start = false;
            ++i;
        }
    }
    if (field_started || !field.empty() || !record.empty()) end_record();
    return records;
}

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

ForgeLoadResult load_forge_forks(const std::filesystem::path& csv_path, const HistoryGraph& g) {
    auto rows = read_csv(csv_path);
    ForgeLoadResult result;
    if (rows.empty()) {
        result.forks = ForgeForkGraph(g.origin_count());
        return result;
    }
    if (rows[0].size() != 2 || rows[0][0] != "child" || rows[0][1] != "parent")
        throw ParseError(csv_path.string() + ":1: expected header 'child,parent'");

    auto resolve = [&](const std::string& field) -> std::optional<NodeIndex> {
        if (looks_like_hex_id(field)) {
            if (auto n = g.find_origin(ArtifactId::from_hex(field))) return n;
        }
        return g.find_origin(origin_id_for_url(field));
    };

    std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 2)
            throw ParseError(csv_path.string() + ": record " + std::to_string(r + 1) +
                             " has " + std::to_string(row.size()) + " fields, expected 2");
        ++result.records;
        auto child = resolve(row[0]);
        auto parent = resolve(row[1]);
        if (!child || !parent) {
            ++result.skipped;
            continue;
        }
        pairs.emplace_back(*child, *parent);
    }
    result.forks = ForgeForkGraph::from_pairs(g.origin_count(), pairs);
    return result;
}

void write_forge_forks(const ForgeForkGraph& f, const HistoryGraph& g,
                       const std::filesystem::path& csv_path) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + csv_path.string());
    out << "child,parent\n";
    for (NodeIndex o = 0; o < f.origin_count(); ++o)
        if (auto p = f.parent(o)) out << g.id(o).hex() << ',' << g.id(*p).hex() << '\n';
    if (!out.flush()) throw IoError("error writing " + csv_path.string());
}

IngestSummary summarize(const HistoryGraph& g, std::size_t skipped_forge_records) {
    return {g.origin_count(), g.revision_count(), g.rootdir_count(), skipped_forge_records};
}

std::string to_json(const IngestSummary& s) {
    nlohmann::ordered_json j;
    j["origins"] = s.origins;
    j["revisions"] = s.revisions;
    j["rootdirs"] = s.rootdirs;
    j["skipped_forge_records"] = s.skipped_forge_records;
    return j.dump(2) + "\n";
}

}  // namespace forkscope
