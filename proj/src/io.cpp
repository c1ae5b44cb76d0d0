#include "regulator/io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace regulator {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read " + path);
    return in;
}

double parse_double(std::string_view field, const std::string& path) {
    double v = 0.0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw io_error(path + ": bad number '" + std::string(field) + "'");
    return v;
}

int parse_int(std::string_view field, const std::string& path) {
    int v = 0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw io_error(path + ": bad integer '" + std::string(field) + "'");
    return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

void expect_header(std::ifstream& in, const std::string& want,
                   const std::string& path) {
    std::string line;
    if (!std::getline(in, line) || line != want)
        throw io_error(path + ": expected header '" + want + "'");
}

json read_json_file(const std::string& path) {
    auto in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw io_error(path + ": " + e.what());
    }
    return j;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw io_error("number formatting failed");
    return std::string(buf, ptr);
}

void write_trace(const std::string& path, const Trace& trace,
                 const std::optional<SourceConfig>& source) {
    {
        auto out = open_out(path);
        out << "j,s,L\n";
        for (const Packet& p : trace.packets)
            out << p.index << ',' << format_double(p.arrival_start) << ','
                << format_double(p.length) << '\n';
    }
    json sidecar;
    sidecar["capacity"] = trace.capacity;
    if (source) {
        sidecar["source"] = {{"seed", source->seed},
                             {"count", source->count},
                             {"lambda", source->lambda},
                             {"min_length", source->min_length},
                             {"max_length", source->max_length}};
    }
    open_out(path + ".json") << sidecar.dump(2) << '\n';
}

Trace read_trace(const std::string& path) {
    Trace trace;
    const json sidecar = read_json_file(path + ".json");
    if (!sidecar.contains("capacity"))
        throw io_error(path + ".json: missing capacity");
    trace.capacity = sidecar.at("capacity").get<double>();

    auto in = open_in(path);
    expect_header(in, "j,s,L", path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 3) throw io_error(path + ": bad row '" + line + "'");
        trace.packets.push_back({parse_int(fields[0], path),
                                 parse_double(fields[1], path),
                                 parse_double(fields[2], path)});
    }
    return trace;
}

namespace {

void write_shaped_rows(std::ofstream& out,
                       const std::vector<ShapedPacket>& packets,
                       const std::vector<StochPacketState>* states) {
    out << "j,s,s_tilde,t,b,sigma_star,delay";
    if (states) out << ",k,sigma_star_index";
    out << '\n';
    for (std::size_t i = 0; i < packets.size(); ++i) {
        const ShapedPacket& p = packets[i];
        out << p.index << ',' << format_double(p.arrival_start) << ','
            << format_double(p.buffer_departure) << ','
            << format_double(p.departure_start) << ','
            << format_double(p.departure_complete) << ','
            << format_double(p.sigma_star) << ',' << format_double(p.delay);
        if (states)
            out << ',' << (*states)[i].floor_index << ','
                << (*states)[i].sigma_index;
        out << '\n';
    }
}

}  // namespace

void write_shaped(const std::string& path,
                  const std::vector<ShapedPacket>& packets) {
    auto out = open_out(path);
    write_shaped_rows(out, packets, nullptr);
}

void write_shaped(const std::string& path,
                  const std::vector<ShapedPacket>& packets,
                  const std::vector<StochPacketState>& states) {
    if (states.size() != packets.size())
        throw std::invalid_argument("write_shaped: state/packet size mismatch");
    auto out = open_out(path);
    write_shaped_rows(out, packets, &states);
}

std::vector<ShapedPacket> read_shaped(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) ||
        (line != "j,s,s_tilde,t,b,sigma_star,delay" &&
         line != "j,s,s_tilde,t,b,sigma_star,delay,k,sigma_star_index"))
        throw io_error(path + ": not a shaped-run file");
    std::vector<ShapedPacket> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 7 && fields.size() != 9)
            throw io_error(path + ": bad row '" + line + "'");
        out.push_back({parse_int(fields[0], path),
                       parse_double(fields[1], path),
                       parse_double(fields[2], path),
                       parse_double(fields[3], path),
                       parse_double(fields[4], path),
                       parse_double(fields[5], path),
                       parse_double(fields[6], path)});
    }
    return out;
}

void write_sample_path(const std::string& path,
                       const std::vector<SamplePoint>& points) {
    auto out = open_out(path);
    out << "t,W\n";
    for (const SamplePoint& p : points)
        out << format_double(p.t) << ',' << format_double(p.w) << '\n';
}

std::vector<SamplePoint> read_sample_path(const std::string& path) {
    auto in = open_in(path);
    expect_header(in, "t,W", path);
    std::vector<SamplePoint> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 2) throw io_error(path + ": bad row '" + line + "'");
        out.push_back({parse_double(fields[0], path),
                       parse_double(fields[1], path)});
    }
    return out;
}

void write_ledger_history(const std::string& path,
                          const std::vector<LedgerSnapshot>& history) {
    auto out = open_out(path);
    out << "t,T_index,o\n";
    for (const LedgerSnapshot& snap : history)
        for (std::size_t i = 0; i < snap.ratios.size(); ++i)
            out << format_double(snap.t) << ',' << (i + 1) << ','
                << format_double(snap.ratios[i]) << '\n';
}

namespace {

FbarVariant variant_from_string(const std::string& s, const std::string& path) {
    if (s == "full") return FbarVariant::full;
    if (s == "modified") return FbarVariant::modified;
    throw io_error(path + ": unknown variant '" + s + "'");
}

std::string variant_to_string(FbarVariant v) {
    return v == FbarVariant::full ? "full" : "modified";
}

BoundSpec spec_from_json(const json& j, const std::string& path) {
    BoundSpec spec;
    try {
        for (const auto& bp : j.at("f"))
            spec.f.breakpoints.emplace_back(bp.at(0).get<double>(),
                                            bp.at(1).get<double>());
        spec.horizon = j.at("T").get<double>();
        spec.f.horizon = spec.horizon;
        spec.m = j.at("M").get<int>();
        spec.t_last = j.at("T_M").get<double>();
        if (j.value("spacing", "uniform") != std::string("uniform"))
            throw io_error(path + ": only uniform spacing is supported");
        spec.variant =
            variant_from_string(j.value("variant", "full"), path);
    } catch (const json::exception& e) {
        throw io_error(path + ": " + e.what());
    }
    spec.f.validate();
    return spec;
}

json spec_to_json(const BoundSpec& spec) {
    json f = json::array();
    for (const auto& [gamma, value] : spec.f.breakpoints)
        f.push_back({gamma, value});
    return {{"f", std::move(f)},
            {"T", spec.horizon},
            {"M", spec.m},
            {"T_M", spec.t_last},
            {"spacing", "uniform"},
            {"variant", variant_to_string(spec.variant)}};
}

}  // namespace

BoundSpec read_bound_spec(const std::string& path) {
    return spec_from_json(read_json_file(path), path);
}

void write_grid(const std::string& path, const BoundGrid& grid,
                const BoundSpec& spec) {
    json pieces = json::array();
    for (const auto& piece : grid.pieces)
        pieces.push_back({{"split", piece.split},
                          {"flat_value", piece.flat_value},
                          {"anchor", piece.anchor},
                          {"slope", piece.slope}});
    json segments = json::array();
    for (const auto& seg : fbar_segments(grid))
        segments.push_back({seg.x0, seg.x1, seg.y0, seg.y1});
    const json j = {{"delta", grid.delta},
                    {"horizon", grid.horizon},
                    {"variant", variant_to_string(grid.variant)},
                    {"thresholds", grid.thresholds},
                    {"bursts", grid.bursts},
                    {"pieces", std::move(pieces)},
                    {"tail_value", grid.tail_value},
                    {"fbar_at_threshold", grid.fbar_at_threshold},
                    {"fbar_segments", std::move(segments)},
                    {"spec", spec_to_json(spec)}};
    open_out(path) << j.dump(2) << '\n';
}

GridFile read_grid(const std::string& path) {
    const json j = read_json_file(path);
    GridFile out;
    try {
        out.grid.delta = j.at("delta").get<double>();
        out.grid.horizon = j.at("horizon").get<double>();
        out.grid.variant =
            variant_from_string(j.at("variant").get<std::string>(), path);
        out.grid.thresholds = j.at("thresholds").get<std::vector<double>>();
        out.grid.bursts = j.at("bursts").get<std::vector<double>>();
        for (const auto& piece : j.at("pieces"))
            out.grid.pieces.push_back({piece.at("split").get<double>(),
                                       piece.at("flat_value").get<double>(),
                                       piece.at("anchor").get<double>(),
                                       piece.at("slope").get<double>()});
        out.grid.tail_value = j.at("tail_value").get<double>();
        out.grid.fbar_at_threshold =
            j.at("fbar_at_threshold").get<std::vector<double>>();
        out.spec = spec_from_json(j.at("spec"), path);
    } catch (const json::exception& e) {
        throw io_error(path + ": " + e.what());
    }
    if (out.grid.size() < 2 ||
        out.grid.bursts.size() != out.grid.size() ||
        out.grid.fbar_at_threshold.size() != out.grid.size() ||
        out.grid.pieces.size() + 2 != out.grid.size())
        throw io_error(path + ": inconsistent grid");
    return out;
}

void write_report(const std::string& path, const RunReport& report) {
    json violations = json::array();
    constexpr std::size_t cap = 10000;  // keep report files bounded
    for (std::size_t i = 0; i < report.violations.size() && i < cap; ++i) {
        const BoundViolation& v = report.violations[i];
        violations.push_back(
            {{"t", v.t}, {"gamma", v.gamma}, {"o", v.ratio}, {"bound", v.bound}});
    }
    const json j = {{"mean_delay", report.delays.mean},
                    {"std_delay", report.delays.stddev},
                    {"thresholds", report.thresholds},
                    {"final_overshoot_ratios", report.final_ratios},
                    {"violation_count", report.violations.size()},
                    {"violations", std::move(violations)},
                    {"ccdf",
                     {{"gamma", report.ccdf_gammas},
                      {"fraction", report.ccdf_values}}}};
    open_out(path) << j.dump(2) << '\n';
}

}  // namespace regulator
