#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <wsurf/wsurf.hpp>

using namespace wsurf;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInputError = 2 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_numbers(const std::string& text, const char* what) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            double x = std::stod(item, &used);
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw std::invalid_argument(item);
            v.push_back(x);
        } catch (const std::logic_error&) {
            throw InputError(std::string("bad number in ") + what + ": '" + item + "'");
        }
    }
    return v;
}

// r0,r1,nr,nphi (polar) or x0,x1,nx,y0,y1,ny (rectangular)
Grid parse_grid(const std::string& text) {
    auto v = parse_numbers(text, "--grid");
    auto count = [&](double x) {
        if (x < 1 || x != std::floor(x) || x > 1e6) throw InputError("grid counts must be positive integers");
        return static_cast<int>(x);
    };
    Grid g;
    if (v.size() == 4)
        g = Grid::polar(v[0], v[1], count(v[2]), count(v[3]));
    else if (v.size() == 6)
        g = Grid::rect(v[0], v[1], count(v[2]), v[3], v[4], count(v[5]));
    else
        throw InputError("--grid expects r0,r1,nr,nphi or x0,x1,nx,y0,y1,ny");
    try {
        g.validate();
    } catch (const SpecParse& e) {
        throw InputError(e.what());
    }
    return g;
}

// Builtin name, JSON path, or inline "w=..." / "w1=...;w2=...".
Solution resolve_solution(const std::string& arg) {
    if (arg.find('=') == std::string::npos) return load_solution(arg);
    SolutionSpec spec;
    spec.name = "custom";
    std::stringstream ss(arg);
    std::string part;
    while (std::getline(ss, part, ';')) {
        auto eq = part.find('=');
        if (eq == std::string::npos) throw SpecParse("inline solution parts look like name=expression");
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            s.erase(s.find_last_not_of(" \t") + 1);
            return s;
        };
        spec.fields[trim(part.substr(0, eq))] = trim(part.substr(eq + 1));
    }
    if (spec.fields.size() == 1 && spec.fields.count("w"))
        spec.model = Model::cp1;
    else if (spec.fields.size() == 2 && spec.fields.count("w1") && spec.fields.count("w2"))
        spec.model = Model::cp2;
    else
        throw SpecParse("inline solution needs w=... or w1=...;w2=...");
    return make_solution(spec);
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Writes through a temporary file so a failed run leaves nothing behind.
class AtomicFile {
public:
    explicit AtomicFile(fs::path target) : target_(std::move(target)), tmp_(target_.string() + ".partial") {
        out_.open(tmp_, std::ios::binary | std::ios::trunc);
        if (!out_) throw InputError("cannot open output file " + target_.string());
    }
    ~AtomicFile() {
        if (!done_) {
            out_.close();
            std::error_code ec;
            fs::remove(tmp_, ec);
        }
    }
    std::ostream& stream() { return out_; }
    void commit() {
        out_.close();
        if (!out_) throw std::runtime_error("write failed for " + target_.string());
        fs::rename(tmp_, target_);
        done_ = true;
    }

private:
    fs::path target_, tmp_;
    std::ofstream out_;
    bool done_ = false;
};

struct Options {
    std::string solution;
    std::string grid = "0.05,3,40,40";
    double tol = 1e-6;
    std::string out;
    std::string format = "csv";
    std::string basepoint;
    std::string triple = "1,2,3";
    bool skip_verify = false;
};

int cmd_verify(const Options& o) {
    const Solution sol = resolve_solution(o.solution);
    const Grid g = parse_grid(o.grid);
    VerifyOptions vo;
    vo.tol = o.tol;
    const auto rep = verify_solution(sol, g, vo);
    auto j = report_json(rep);
    j["grid"] = o.grid;
    j["tol"] = o.tol;
    const std::string text = j.dump(2) + "\n";
    if (o.out.empty()) {
        std::cout << text;
    } else {
        AtomicFile f(o.out);
        f.stream() << text;
        f.commit();
    }
    for (auto& c : rep.checks)
        if (!c.informational && !c.pass)
            std::cerr << "check failed: " << c.name << " (max residual " << num(c.max_residual) << ")\n";
    return rep.pass() ? kOk : kVerifyFailed;
}

double model_residual(const Solution& s, cd z) {
    try {
        if (s.is_cp1()) return std::abs(cp1_residual(*s.cp1, DomainPoint{z}));
        auto r = cp2_residual(*s.cp2, DomainPoint{z});
        return std::max(std::abs(r.first), std::abs(r.second));
    } catch (const Error&) {
        return std::nan("");
    }
}

int cmd_immerse(const Options& o) {
    if (o.out.empty()) throw InputError("immerse needs --out");
    if (o.format != "csv" && o.format != "obj") throw InputError("--format must be csv or obj");
    const Solution sol = resolve_solution(o.solution);
    const Grid g = parse_grid(o.grid);

    if (!o.skip_verify) {
        VerifyOptions vo;
        vo.tol = o.tol;
        vo.subspace_analysis = false;
        auto rep = verify_solution(sol, g, vo);
        if (!rep.pass()) {
            for (auto& c : rep.checks)
                if (!c.informational && !c.pass) std::cerr << "check failed: " << c.name << "\n";
            std::cerr << "solution does not pass verification; no surface written\n";
            return kVerifyFailed;
        }
    }

    const Immersion imm = sol.is_cp1() ? generalized_r3_immersion(*sol.cp1) : cp2_immersion(*sol.cp2);
    GridOptions go;
    if (!o.basepoint.empty()) {
        auto b = parse_numbers(o.basepoint, "--basepoint");
        if (b.size() != 2) throw InputError("--basepoint expects x,y");
        go.basepoint = cd(b[0], b[1]);
    }
    for (size_t k = 0; k < g.size(); ++k) {
        cd z = g.point(static_cast<int>(k / g.n2), static_cast<int>(k % g.n2));
        if (sol.puncture_distance(z) <= 1e-9) throw InputError("grid point lies on a puncture");
    }
    const SurfaceGrid sg = immerse_grid(imm, g, go);

    if (o.format == "obj") {
        auto t = parse_numbers(o.triple, "--component-triple");
        if (t.size() != 3) throw InputError("--component-triple expects i,j,k");
        int idx[3];
        for (int q = 0; q < 3; ++q) {
            if (t[q] != std::floor(t[q]) || t[q] < 1 || t[q] > static_cast<double>(sg.dim))
                throw InputError("component index out of range 1.." + std::to_string(sg.dim));
            idx[q] = static_cast<int>(t[q]) - 1;
        }
        AtomicFile f(o.out);
        auto& os = f.stream();
        os << "# " << sol.spec.name << " components " << idx[0] + 1 << "," << idx[1] + 1 << "," << idx[2] + 1 << "\n";
        for (auto& X : sg.X) os << "v " << num(X[idx[0]]) << " " << num(X[idx[1]]) << " " << num(X[idx[2]]) << "\n";
        const bool wrap = g.kind == Grid::Kind::polar && g.n2 > 2;
        for (int i = 0; i + 1 < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j) {
                if (j + 1 == g.n2 && !wrap) continue;
                const int jn = (j + 1) % g.n2;
                const size_t a = g.index(i, j) + 1, b = g.index(i + 1, j) + 1, c = g.index(i + 1, jn) + 1,
                             d = g.index(i, jn) + 1;
                os << "f " << a << " " << b << " " << c << "\n";
                os << "f " << a << " " << c << " " << d << "\n";
            }
        f.commit();
        return kOk;
    }

    AtomicFile f(o.out);
    auto& os = f.stream();
    os << "x,y";
    for (size_t k = 0; k < sg.dim; ++k) os << ",X" << k + 1;
    os << ",K,H_abs,residual_model,quad_error\n";
    for (size_t k = 0; k < sg.X.size(); ++k) {
        const cd z = sg.z(k);
        double K = std::nan(""), H = std::nan("");
        try {
            auto r = geometry_from_partials(sg.partials[k]);
            K = r.K;
            H = r.H;
        } catch (const DegenerateData&) {
        }
        os << num(z.real()) << "," << num(z.imag());
        for (double x : sg.X[k]) os << "," << num(x);
        os << "," << num(K) << "," << num(H) << "," << num(model_residual(sol, z)) << "," << num(sg.quad_error[k])
           << "\n";
    }
    f.commit();
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Surfaces from CP1/CP2 sigma model solutions"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--solution", o.solution, "builtin name, JSON spec path, or inline w=... / w1=...;w2=...")
            ->required();
        sub->add_option("--grid", o.grid, "r0,r1,nr,nphi (polar) or x0,x1,nx,y0,y1,ny (rectangular)");
        sub->add_option("--tol", o.tol, "residual tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--out", o.out, "output path");
    };
    auto* verify = app.add_subcommand("verify", "run the residual suite and write a JSON report");
    add_common(verify);
    auto* immerse = app.add_subcommand("immerse", "integrate the immersion over a grid");
    add_common(immerse);
    immerse->add_option("--format", o.format, "csv or obj")->check(CLI::IsMember({"csv", "obj"}));
    immerse->add_option("--basepoint", o.basepoint, "integration basepoint x,y");
    immerse->add_option("--component-triple", o.triple, "components used for OBJ vertices (1-based)");
    immerse->add_flag("--skip-verify", o.skip_verify, "do not run the residual suite first");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }

    try {
        if (verify->parsed()) return cmd_verify(o);
        return cmd_immerse(o);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const SpecParse& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const UnknownName& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const PunctureViolation& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const PunctureOnPath& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kVerifyFailed;
    }
}
