#include "sourcecr/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

namespace sourcecr {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::int64_t parse_int(std::string_view text, std::size_t line, const char* what) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size() || text.empty())
        throw ParseError(fmt::format("bad {} '{}'", what, text), line);
    return v;
}

double parse_double(std::string_view text, std::size_t line, const char* what) {
    const std::string s = lower(trim(text));
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (s.empty() || used != s.size()) throw ParseError(fmt::format("bad {} '{}'", what, text), line);
    return v;
}

/// Column positions of `names` in the header; throws if any is missing.
std::vector<std::size_t> columns(const CsvTable& t, std::initializer_list<const char*> names) {
    std::vector<std::size_t> out;
    for (const char* name : names) {
        auto it = std::find_if(t.header.begin(), t.header.end(),
                               [&](const std::string& h) { return lower(trim(h)) == name; });
        if (it == t.header.end()) throw ParseError(fmt::format("missing column '{}'", name), 1);
        out.push_back(static_cast<std::size_t>(it - t.header.begin()));
    }
    return out;
}

std::string join_ids(const SocialGraph& g, std::span<const Vertex> vs) {
    std::string out;
    for (Vertex v : vs) {
        if (!out.empty()) out += ' ';
        out += std::to_string(g.id(v));
    }
    return out;
}

std::string node_or_empty(const SocialGraph& g, Vertex v) {
    return v == kNoVertex ? std::string() : std::to_string(g.id(v));
}

} // namespace

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(fields[i]);
    }
    out << "\r\n";
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t line = 1;
    std::size_t row_line = 1;

    auto end_row = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
        const bool blank = row.size() == 1 && row[0].empty();
        if (!blank) {
            if (table.header.empty()) {
                table.header = std::move(row);
            } else {
                if (row.size() != table.header.size())
                    throw ParseError(fmt::format("expected {} fields, got {}", table.header.size(), row.size()),
                                     row_line);
                table.rows.push_back(std::move(row));
                table.lines.push_back(row_line);
            }
        }
        row.clear();
    };

    char c = 0;
    while (in.get(c)) {
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            field_started = false;
        } else if (c == '\r') {
            if (in.peek() != '\n') field += c;
        } else if (c == '\n') {
            end_row();
            row_line = ++line;
        } else {
            field += c;
            field_started = true;
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", row_line);
    if (!field.empty() || !row.empty()) end_row();
    return table;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", x);
}

std::vector<OpinionRecord> read_opinion_records(std::istream& in) {
    const CsvTable t = read_csv(in);
    if (t.header.empty()) return {};
    const auto col = columns(t, {"claim_id", "user_id", "opinion"});
    std::vector<OpinionRecord> out;
    std::set<std::pair<NodeId, ClaimId>> seen;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::size_t line = t.lines[r];
        OpinionRecord rec{};
        rec.claim = parse_int(row[col[0]], line, "claim id");
        rec.user = parse_int(row[col[1]], line, "user id");
        const std::string tok = lower(trim(row[col[2]]));
        if (tok == "1" || tok == "+1" || tok == "for") {
            rec.value = 1;
        } else if (tok == "-1" || tok == "against") {
            rec.value = -1;
        } else {
            throw ParseError(fmt::format("unknown opinion '{}'", row[col[2]]), line);
        }
        if (!seen.emplace(rec.user, rec.claim).second)
            throw ParseError(fmt::format("duplicate opinion for user {} on claim {}", rec.user, rec.claim), line);
        out.push_back(rec);
    }
    return out;
}

OpinionMatrix load_opinions_csv(const std::string& path, std::span<const NodeId> users) {
    auto in = open_input(path);
    const auto records = read_opinion_records(in);
    return OpinionMatrix(users, {}, records);
}

void write_opinions_csv(const OpinionMatrix& opinions, std::ostream& out) {
    write_csv_row(out, {"claim_id", "user_id", "opinion"});
    for (std::size_t j = 0; j < opinions.claim_count(); ++j) {
        for (const auto& e : opinions.column(j)) {
            write_csv_row(out, {std::to_string(opinions.claim_id(j)), std::to_string(opinions.user_id(e.index)),
                                std::to_string(static_cast<int>(e.value))});
        }
    }
}

LabelMap read_claim_labels(std::istream& in) {
    const CsvTable t = read_csv(in);
    LabelMap out;
    if (t.header.empty()) return out;
    const auto col = columns(t, {"claim_id", "label"});
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const ClaimId claim = parse_int(row[col[0]], t.lines[r], "claim id");
        const std::string tok = lower(trim(row[col[1]]));
        int z = 0;
        if (tok == "true") {
            z = 1;
        } else if (tok == "false") {
            z = -1;
        } else {
            throw ParseError(fmt::format("unknown label '{}'", row[col[1]]), t.lines[r]);
        }
        if (!out.emplace(claim, z).second)
            throw ParseError(fmt::format("duplicate label for claim {}", claim), t.lines[r]);
    }
    return out;
}

LabelMap load_claim_labels_csv(const std::string& path) {
    auto in = open_input(path);
    return read_claim_labels(in);
}

void write_claim_labels_csv(const LabelMap& labels, std::ostream& out) {
    write_csv_row(out, {"claim_id", "label"});
    for (const auto& [claim, z] : labels) write_csv_row(out, {std::to_string(claim), z > 0 ? "true" : "false"});
}

void write_spread_csv(const SocialGraph& g, std::span<const SpreadOutcome> outcomes, std::ostream& out) {
    write_csv_row(out, {"claim_id", "node_id", "state", "infect_time", "parent_id"});
    for (const auto& o : outcomes) {
        for (Vertex v = 0; v < o.state.size(); ++v) {
            if (o.state[v] == NodeState::kSusceptible) continue;
            write_csv_row(out, {std::to_string(o.claim), std::to_string(g.id(v)),
                                o.state[v] == NodeState::kPros ? "pros" : "cons", format_number(o.infect_time[v]),
                                node_or_empty(g, o.infect_parent[v])});
        }
    }
}

std::vector<SpreadOutcome> read_spread_csv(const SocialGraph& g, std::istream& in) {
    const CsvTable t = read_csv(in);
    if (t.header.empty()) return {};
    const auto col = columns(t, {"claim_id", "node_id", "state", "infect_time", "parent_id"});
    std::map<ClaimId, SpreadOutcome> by_claim;
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::size_t line = t.lines[r];
        const ClaimId claim = parse_int(row[col[0]], line, "claim id");
        auto [it, fresh] = by_claim.try_emplace(claim);
        SpreadOutcome& o = it->second;
        if (fresh) {
            o.claim = claim;
            o.state.assign(g.node_count(), NodeState::kSusceptible);
            o.infect_time.assign(g.node_count(), inf);
            o.infect_parent.assign(g.node_count(), kNoVertex);
        }
        const NodeId node = parse_int(row[col[1]], line, "node id");
        const auto v = g.find(node);
        if (!v) throw ParseError(fmt::format("node {} is not in the graph", node), line);
        if (o.state[*v] != NodeState::kSusceptible)
            throw ParseError(fmt::format("duplicate record for node {} on claim {}", node, claim), line);
        const std::string state = lower(trim(row[col[2]]));
        if (state == "pros") {
            o.state[*v] = NodeState::kPros;
        } else if (state == "cons") {
            o.state[*v] = NodeState::kCons;
        } else {
            throw ParseError(fmt::format("unknown state '{}'", row[col[2]]), line);
        }
        o.infect_time[*v] = parse_double(row[col[3]], line, "infect time");
        const std::string_view parent = trim(row[col[4]]);
        if (parent.empty()) {
            Vertex& src = o.state[*v] == NodeState::kPros ? o.pros_source : o.cons_source;
            if (src != kNoVertex) throw ParseError(fmt::format("claim {} has two {} sources", claim, state), line);
            src = *v;
        } else {
            const NodeId pid = parse_int(parent, line, "parent id");
            const auto pv = g.find(pid);
            if (!pv || !g.has_edge(*pv, *v))
                throw ParseError(fmt::format("parent {} is not a neighbor of {}", pid, node), line);
            o.infect_parent[*v] = *pv;
        }
    }
    std::vector<SpreadOutcome> out;
    out.reserve(by_claim.size());
    for (auto& [claim, o] : by_claim) out.push_back(std::move(o));
    return out;
}

std::vector<ClaimGroundTruth> truths_from_spread(std::span<const SpreadOutcome> outcomes, const LabelMap& z) {
    std::vector<ClaimGroundTruth> out;
    for (const auto& o : outcomes) {
        auto it = z.find(o.claim);
        out.push_back({o.claim, it == z.end() ? 0 : it->second, o.pros_source, o.cons_source});
    }
    return out;
}

void write_credibility_csv(const OpinionMatrix& opinions, std::span<const double> credibility,
                           std::span<const double> prior, std::ostream& out) {
    write_csv_row(out, {"claim_id", "credibility", "prior", "verdict"});
    for (std::size_t j = 0; j < opinions.claim_count(); ++j) {
        write_csv_row(out, {std::to_string(opinions.claim_id(j)), format_number(credibility[j]),
                            j < prior.size() ? format_number(prior[j]) : std::string(),
                            credibility[j] >= 0.5 ? "truth" : "rumor"});
    }
}

std::map<ClaimId, double> read_credibility_csv(std::istream& in) {
    const CsvTable t = read_csv(in);
    std::map<ClaimId, double> out;
    if (t.header.empty()) return out;
    const auto col = columns(t, {"claim_id", "credibility"});
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const ClaimId claim = parse_int(t.rows[r][col[0]], t.lines[r], "claim id");
        out[claim] = parse_double(t.rows[r][col[1]], t.lines[r], "credibility");
    }
    return out;
}

void write_reliability_csv(const OpinionMatrix& opinions, std::span<const double> eta_pos,
                           std::span<const double> eta_neg, std::span<const double> reliability,
                           std::ostream& out) {
    write_csv_row(out, {"user_id", "eta_pos", "eta_neg", "reliability"});
    for (std::size_t i = 0; i < opinions.user_count(); ++i) {
        write_csv_row(out, {std::to_string(opinions.user_id(i)), format_number(eta_pos[i]), format_number(eta_neg[i]),
                            format_number(reliability[i])});
    }
}

ReliabilityMap read_reliability_csv(std::istream& in) {
    const CsvTable t = read_csv(in);
    ReliabilityMap out;
    if (t.header.empty()) return out;
    const auto col = columns(t, {"user_id", "reliability"});
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const NodeId user = parse_int(t.rows[r][col[0]], t.lines[r], "user id");
        out[user] = parse_double(t.rows[r][col[1]], t.lines[r], "reliability");
    }
    return out;
}

void write_detections_csv(const SocialGraph& g, std::span<const DetectionResult> detections, std::ostream& out) {
    write_csv_row(out, {"claim_id", "side", "attempted", "label", "center", "source", "t_id", "t_dir"});
    for (const auto& d : detections) {
        for (Side s : {Side::kPros, Side::kCons}) {
            const SideDetection& sd = d.side(s);
            write_csv_row(out, {std::to_string(d.claim), to_string(s), sd.attempted ? "1" : "0",
                                sd.attempted ? to_string(sd.label) : "", node_or_empty(g, sd.center),
                                node_or_empty(g, sd.source), join_ids(g, sd.sets.by_identity),
                                join_ids(g, sd.sets.by_direction)});
        }
    }
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

} // namespace sourcecr
