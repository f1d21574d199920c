#include "gstrain/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gstrain/util.hpp"

namespace gstrain {

namespace {
std::string row(std::initializer_list<double> vals) {
    std::string out;
    bool first = true;
    for (double v : vals) {
        if (!first) out += ',';
        out += format_double(v);
        first = false;
    }
    out += '\n';
    return out;
}
}  // namespace

std::string curve_csv(const StrainCurve& curve) {
    std::string out = "c,h,flat\n";
    for (const auto& pt : curve.points) {
        out += format_double(pt.c);
        out += ',';
        out += format_double(pt.h);
        out += ',';
        out += pt.flat ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string field_csv(const FieldRealization& r, double x0, double x1, int samples) {
    std::string out = "x,v,v_prime\n";
    for (int i = 0; i < samples; ++i) {
        const double x = samples == 1 ? x0 : x0 + (x1 - x0) * i / double(samples - 1);
        out += row({x, r.v(x), r.v_prime(x)});
    }
    return out;
}

std::string effective_csv(const std::vector<std::pair<double, double>>& p_h) {
    std::string out = "p,H_eff\n";
    for (const auto& [p, h] : p_h) out += row({p, h});
    return out;
}

std::string ptables_csv(const EffectiveHamiltonian& eff) {
    std::string out = "mu,P_plus,P_minus\n";
    for (std::size_t i = 0; i < eff.mu_grid().size(); ++i)
        out += row({eff.mu_grid()[i], eff.table_plus()[i], eff.table_minus()[i]});
    return out;
}

std::string discount_csv(const DiscountEstimates& est) {
    std::string out = "delta,estimate\n";
    for (const auto& [d, e] : est.per_delta) out += row({d, e});
    return out;
}

std::string speed_series_csv(const SpeedEstimate& est) {
    std::string out = "t,speed\n";
    for (const auto& [t, s] : est.series) out += row({t, s});
    return out;
}

std::string hsurface_csv(const StrainHamiltonian& h, double p_min, double p_max, int np,
                         double x_min, double x_max, int nx) {
    std::string out = "p,x,H\n";
    for (int i = 0; i < np; ++i) {
        const double p = np == 1 ? p_min : p_min + (p_max - p_min) * i / double(np - 1);
        for (int j = 0; j < nx; ++j) {
            const double x = nx == 1 ? x_min : x_min + (x_max - x_min) * j / double(nx - 1);
            out += row({p, x, h.eval(p, x)});
        }
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_front_grid(const std::string& path_base, const FrontState& st) {
    nlohmann::ordered_json hdr;
    hdr["nx"] = st.nx;
    hdr["ny"] = st.ny;
    hdr["dx"] = st.dx;
    hdr["dy"] = st.dy;
    hdr["t"] = st.t;
    hdr["m"] = st.m;
    hdr["n"] = st.n;
    write_text_file(path_base + ".json", hdr.dump(2) + "\n");

    std::ofstream out(path_base + ".bin", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path_base + ".bin");
    std::vector<double> g(st.w.size());
    for (int j = 0; j < st.ny; ++j)
        for (int i = 0; i < st.nx; ++i)
            g[static_cast<std::size_t>(j) * st.nx + i] = st.g(i, j);
    out.write(reinterpret_cast<const char*>(g.data()),
              static_cast<std::streamsize>(g.size() * sizeof(double)));
}

}  // namespace gstrain
