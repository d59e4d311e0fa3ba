#include "slick/state_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "slick/errors.hpp"
#include "slick/geometry_pack.hpp"

namespace slick {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'S', 'L', 'K', 'S', 'T', 'A', 'T', '1'};

void write_complex(std::ofstream& out, const std::vector<cplx>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(cplx)));
}

void read_complex(std::ifstream& in, std::vector<cplx>& v) {
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(cplx)));
}

json state_arrays(const std::string& prefix, const FlowState& s, size_t& offset) {
    json arr = json::array();
    auto add = [&](const std::string& name, size_t count) {
        arr.push_back({{"name", prefix + name},
                       {"dtype", "c128"},
                       {"count", count},
                       {"offset", offset}});
        offset += count * 16;
    };
    const auto& g = *s.grid();
    const size_t nb = static_cast<size_t>(g.nmodes()) * g.Nz;
    const size_t ns = g.nmodes();
    add("u1", nb);
    add("u2", nb);
    add("u3", nb);
    add("p", nb);
    add("eta", ns);
    add("ctilde", ns);
    return arr;
}

void write_state_payload(std::ofstream& out, const FlowState& s) {
    for (int i = 0; i < 3; ++i) write_complex(out, s.u[i].coef());
    write_complex(out, s.p.coef());
    write_complex(out, s.eta.coef());
    write_complex(out, s.ctilde.coef());
}

void read_state_payload(std::ifstream& in, FlowState& s) {
    for (int i = 0; i < 3; ++i) read_complex(in, s.u[i].coef());
    read_complex(in, s.p.coef());
    read_complex(in, s.eta.coef());
    read_complex(in, s.ctilde.coef());
}

}  // namespace

void save_state(const std::string& path, const StateDump& dump) {
    const auto& g = *dump.state.grid();
    json header;
    header["format"] = "slick-state";
    header["version"] = 1;
    header["byte_order"] = "little";
    header["grid"] = {{"L1", g.L1},  {"L2", g.L2},  {"b", g.depth},
                      {"N1", g.N1},  {"N2", g.N2},  {"Nz", g.Nz},
                      {"dealias_rule",
                       g.rule == DealiasRule::two_thirds ? "two_thirds" : "three_halves"}};
    header["t"] = dump.state.t;
    header["step"] = dump.step;
    header["c0"] = dump.c0;
    header["mass0"] = dump.mass0;
    header["has_prev"] = dump.prev.has_value();
    header["has_prevprev"] = dump.prevprev.has_value();
    if (dump.prev) header["t_prev"] = dump.prev->t;
    if (dump.prevprev) header["t_prevprev"] = dump.prevprev->t;
    {
        json tail = json::array();
        for (const auto& s : dump.tail)
            tail.push_back({{"t", s.t},
                            {"e_phys", s.e_phys},
                            {"d_phys", s.d_phys},
                            {"mass", s.mass},
                            {"e_sob", s.e_sob},
                            {"d_sob", s.d_sob},
                            {"eta_mean", s.eta_mean},
                            {"compat", s.compat}});
        header["tail_samples"] = tail;
    }

    size_t offset = 0;
    json arrays = state_arrays("", dump.state, offset);
    if (dump.prev)
        for (auto& a : state_arrays("prev/", *dump.prev, offset)) arrays.push_back(a);
    if (dump.prevprev)
        for (auto& a : state_arrays("prevprev/", *dump.prevprev, offset)) arrays.push_back(a);
    header["arrays"] = arrays;

    const std::string htext = header.dump();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("save_state: cannot open " + path);
    out.write(kMagic, 8);
    const uint32_t hlen = static_cast<uint32_t>(htext.size());
    out.write(reinterpret_cast<const char*>(&hlen), 4);
    out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
    write_state_payload(out, dump.state);
    if (dump.prev) write_state_payload(out, *dump.prev);
    if (dump.prevprev) write_state_payload(out, *dump.prevprev);
    if (!out) throw Error("save_state: write failed for " + path);
}

StateDump load_state(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("load_state: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0) throw Error("load_state: bad magic");
    uint32_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), 4);
    std::string htext(hlen, '\0');
    in.read(htext.data(), hlen);
    json header = json::parse(htext);

    const auto& jg = header.at("grid");
    const std::string rule = jg.at("dealias_rule").get<std::string>();
    auto grid = make_grid(jg.at("L1").get<double>(), jg.at("L2").get<double>(),
                          jg.at("b").get<double>(), jg.at("N1").get<int>(),
                          jg.at("N2").get<int>(), jg.at("Nz").get<int>(),
                          rule == "two_thirds" ? DealiasRule::two_thirds
                                               : DealiasRule::three_halves);

    StateDump dump;
    dump.state = FlowState(grid);
    read_state_payload(in, dump.state);
    dump.state.t = header.at("t").get<double>();
    dump.step = header.at("step").get<long>();
    dump.c0 = header.at("c0").get<double>();
    dump.mass0 = header.at("mass0").get<double>();
    if (header.value("has_prev", false)) {
        FlowState prev(grid);
        read_state_payload(in, prev);
        prev.t = header.at("t_prev").get<double>();
        dump.prev = std::move(prev);
    }
    if (header.value("has_prevprev", false)) {
        FlowState pp(grid);
        read_state_payload(in, pp);
        pp.t = header.at("t_prevprev").get<double>();
        dump.prevprev = std::move(pp);
    }
    for (const auto& js : header.value("tail_samples", json::array())) {
        BudgetSample s;
        s.t = js.at("t").get<double>();
        s.e_phys = js.at("e_phys").get<double>();
        s.d_phys = js.at("d_phys").get<double>();
        s.mass = js.at("mass").get<double>();
        s.e_sob = js.at("e_sob").get<double>();
        s.d_sob = js.at("d_sob").get<double>();
        s.eta_mean = js.at("eta_mean").get<double>();
        s.compat = js.at("compat").get<double>();
        dump.tail.push_back(s);
    }
    if (!in) throw Error("load_state: truncated file " + path);
    return dump;
}

void export_theta(const std::string& path, const FlowState& state) {
    const auto& g = *state.grid();
    const auto pack = build_geometry_pack(state.eta);
    const auto ext = pack.eta_ext.phys();
    std::array<std::vector<double>, 3> up;
    for (int i = 0; i < 3; ++i) up[i] = state.u[i].phys();

    std::ofstream out(path);
    if (!out) throw Error("export_theta: cannot open " + path);
    out << "x1,x2,x3,u1,u2,u3\n";
    const int np = g.nphys();
    for (int j = 0; j < g.Nz; ++j) {
        const double z = g.z()[j];
        const double btilde = 1.0 + z / g.depth;
        for (int q = 0; q < np; ++q) {
            const size_t idx = static_cast<size_t>(j) * np + q;
            const double x3 = z + ext[idx] * btilde;
            out << format_g17(g.x1p(q)) << ',' << format_g17(g.x2p(q)) << ','
                << format_g17(x3) << ',' << format_g17(up[0][idx]) << ','
                << format_g17(up[1][idx]) << ',' << format_g17(up[2][idx]) << '\n';
        }
    }
    if (!out) throw Error("export_theta: write failed for " + path);
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace slick
