#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "conjlim/criteria.hpp"
#include "conjlim/goodpath.hpp"
#include "conjlim/matrix_io.hpp"
#include "conjlim/modifier.hpp"
#include "conjlim/pathsim.hpp"
#include "conjlim/suites.hpp"

using namespace conjlim;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitSuiteBase = 10;

void emit(const json& j, const std::string& out)
{
    const std::string text = j.dump(2) + "\n";
    if (out.empty() || out == "-")
        std::cout << text;
    else
        write_file(out, text);
}

Matrix need(const std::string& path, const char* flag)
{
    if (path.empty())
        throw Error(ErrorKind::InvalidInput, std::string("missing ") + flag);
    return load_matrix(path);
}

std::uint64_t need_seed(const std::optional<std::uint64_t>& seed, const char* what)
{
    if (!seed)
        throw Error(ErrorKind::InvalidInput, std::string(what) + " is randomized: --seed is required");
    return *seed;
}

// id | J | hadamard:h.json | general:l.json
Modifier parse_phi(const std::string& spec, Eigen::Index n)
{
    if (spec.empty() || spec == "id")
        return Modifier::identity(n);
    if (spec == "J")
        return Modifier::J(n);
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string kind = spec.substr(0, colon);
        const std::string file = spec.substr(colon + 1);
        if (kind == "hadamard")
            return Modifier::hadamard(load_matrix(file));
        if (kind == "general")
            return Modifier::general(load_matrix(file));
    }
    throw Error(ErrorKind::InvalidInput, "unknown --phi '" + spec + "'");
}

std::vector<Matrix> matrix_list(const json& j, const std::string& where)
{
    if (!j.is_array())
        throw Error(ErrorKind::Parse, where + ": expected an array of matrices");
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(matrix_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

// linear:{"Z","E"} | poly:{"Z","E":[...]} | goodpath:<GoodPath> | samples:{"samples":[{"t","U"}]}
PathSpec parse_path(const std::string& spec)
{
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw Error(ErrorKind::InvalidInput, "--path expects kind:file");
    const std::string kind = spec.substr(0, colon);
    const std::string file = spec.substr(colon + 1);
    const json j = parse_json_text(read_file(file), file);
    if (kind == "goodpath")
        return PathSpec::good(goodpath_from_json(j));
    if (!j.is_object())
        throw Error(ErrorKind::Parse, file + ": expected an object");
    if (kind == "linear")
        return PathSpec::linear(matrix_from_json(j.value("Z", json()), file + ".Z"),
                                matrix_from_json(j.value("E", json()), file + ".E"));
    if (kind == "poly")
        return PathSpec::polynomial(matrix_from_json(j.value("Z", json()), file + ".Z"),
                                    matrix_list(j.value("E", json()), file + ".E"));
    if (kind == "samples") {
        const json& s = j.value("samples", json());
        if (!s.is_array())
            throw Error(ErrorKind::Parse, file + ".samples: expected an array");
        std::vector<std::pair<double, Matrix>> pts;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const std::string where = file + ".samples[" + std::to_string(i) + "]";
            if (!s[i].is_object() || !s[i].contains("t") || !s[i]["t"].is_number())
                throw Error(ErrorKind::Parse, where + ": expected {t, U}");
            pts.emplace_back(s[i]["t"].get<double>(), matrix_from_json(s[i].value("U", json()), where + ".U"));
        }
        return PathSpec::from_samples(std::move(pts));
    }
    throw Error(ErrorKind::InvalidInput, "unknown path kind '" + kind + "'");
}

std::vector<double> parse_grid(const std::string& spec)
{
    std::istringstream in(spec);
    double lo = 0, hi = 0;
    int n = 0;
    char c1 = 0, c2 = 0;
    if (!(in >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || !(lo > 0) || !(hi > lo) || n < 2)
        throw Error(ErrorKind::InvalidInput, "--grid expects lo:hi:n with 0 < lo < hi and n >= 2");
    return log_grid(lo, hi, n);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"conjlim: boundedness of conjugation orbits near singular matrices"};
    app.require_subcommand(1);

    std::string Zf, Af, Cf, out, op, phi_spec;
    std::optional<std::uint64_t> seed;

    auto* crit = app.add_subcommand("criteria", "kernel/image membership and the kernel-preserving algebra");
    long n = 0, m = 0;
    crit->add_option("--op", op, "sker|sim|sc|dim|basis")->required()
        ->check(CLI::IsMember({"sker", "sim", "sc", "dim", "basis"}));
    crit->add_option("--Z", Zf);
    crit->add_option("--A", Af);
    crit->add_option("--C", Cf);
    crit->add_option("--n", n, "size for --op dim");
    crit->add_option("--m", m, "rank for --op dim");
    crit->add_option("--out", out);

    auto* gp = app.add_subcommand("goodpath", "construct a linear good path and its Laurent inverse");
    int order = 8;
    gp->add_option("--Z", Zf)->required();
    gp->add_option("--order", order)->check(CLI::NonNegativeNumber);
    gp->add_option("--out", out);

    auto* mod = app.add_subcommand("modifier", "membership and faithfulness under a linear modifier");
    mod->add_option("--op", op, "member|member-dual|faithful|gershgorin|jbound")->required()
        ->check(CLI::IsMember({"member", "member-dual", "faithful", "gershgorin", "jbound"}));
    mod->add_option("--phi", phi_spec, "id|J|hadamard:h.json|general:l.json");
    mod->add_option("--Z", Zf);
    mod->add_option("--A", Af);
    mod->add_option("--seed", seed);
    mod->add_option("--out", out);

    auto* sim = app.add_subcommand("simulate", "sample norms along a path and fit the growth exponent");
    std::string path_spec, grid_spec, csv;
    sim->add_option("--path", path_spec, "linear|poly|goodpath|samples:file.json")->required();
    sim->add_option("--A", Af)->required();
    sim->add_option("--phi", phi_spec);
    sim->add_option("--grid", grid_spec, "lo:hi:n");
    sim->add_option("--csv", csv, "write (t, norm) table");
    sim->add_option("--out", out);

    auto* suite = app.add_subcommand("suite", "run a verification suite");
    std::string suite_id;
    int cases = 0;
    suite->add_option("--id", suite_id)->required();
    suite->add_option("--seed", seed);
    suite->add_option("--cases", cases, "instance count override")->check(CLI::NonNegativeNumber);
    suite->add_option("--out", out);

    auto* conv = app.add_subcommand("convert", "JSON <-> CSV matrix conversion");
    std::string in, to;
    conv->add_option("--in", in)->required();
    conv->add_option("--to", to)->required()->check(CLI::IsMember({"json", "csv"}));
    conv->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    try {
        if (crit->parsed()) {
            if (op == "dim") {
                emit({{"n", n}, {"m", m}, {"dim", dim_S_ker(n, m)}}, out);
                return 0;
            }
            const Matrix Z = need(Zf, "--Z");
            if (op == "basis") {
                json arr = json::array();
                for (const Matrix& B : basis_S_ker(Z))
                    arr.push_back(matrix_to_json(B));
                emit({{"dim", arr.size()}, {"basis", arr}}, out);
                return 0;
            }
            const Matrix A = need(Af, "--A");
            MembershipVerdict v;
            if (op == "sker")
                v = in_S_ker(A, Z);
            else if (op == "sim")
                v = in_S_im(A, Z);
            else
                v = in_S_C(A, Z, need(Cf, "--C"));
            emit(verdict_to_json(v), out);
            return 0;
        }
        if (gp->parsed()) {
            emit(goodpath_to_json(construct_good_path(need(Zf, "--Z"), {}, order)), out);
            return 0;
        }
        if (mod->parsed()) {
            if (op == "gershgorin" || op == "jbound") {
                const Matrix A = need(Af, "--A");
                if (op == "jbound") {
                    const JBound b = j_norm_bound(A);
                    emit({{"holds", b.holds}, {"bound", b.bound}, {"diag_abs_sum", b.diag_abs_sum},
                          {"radii_sum", b.radii_sum}, {"eig_abs_sum", b.eig_abs_sum}}, out);
                } else {
                    const GershgorinRegion g = gershgorin(A);
                    json disks = json::array();
                    for (std::size_t k = 0; k < g.centers.size(); ++k)
                        disks.push_back({{"center", {g.centers[k].real(), g.centers[k].imag()}},
                                         {"radius", g.radii[k]}});
                    emit({{"disks", disks}}, out);
                }
                return 0;
            }
            if (op == "faithful") {
                if (phi_spec.empty())
                    throw Error(ErrorKind::InvalidInput, "missing --phi");
                const std::string head = phi_spec.substr(0, phi_spec.find(':'));
                Eigen::Index dim = 0;
                if (head == "hadamard" || head == "general") {
                    const Matrix M = load_matrix(phi_spec.substr(phi_spec.find(':') + 1));
                    dim = head == "hadamard" ? M.rows()
                                             : static_cast<Eigen::Index>(std::llround(std::sqrt(M.rows())));
                } else {
                    dim = need(Zf.empty() ? Af : Zf, "--Z or --A").rows();
                }
                const Modifier phi = parse_phi(phi_spec, dim);
                const std::uint64_t s = phi.kind() == Modifier::Kind::General
                                            ? need_seed(seed, "faithful with a general modifier")
                                            : seed.value_or(0);
                const FaithfulnessResult r = nilpotent_faithful(phi, {}, s);
                json j = {{"faithful", r.faithful}, {"exact", r.exact}};
                if (r.counterexample)
                    j["counterexample"] = matrix_to_json(*r.counterexample);
                emit(j, out);
                return 0;
            }
            const Matrix Z = need(Zf, "--Z");
            const Matrix A = need(Af, "--A");
            const Modifier phi = parse_phi(phi_spec, Z.rows());
            const std::uint64_t s = need_seed(seed, "modifier membership");
            emit(verdict_to_json(op == "member" ? in_S_union_phi(A, Z, phi, {}, s)
                                                : in_S_union_phi_dual(A, Z, phi, {}, s)),
                 out);
            return 0;
        }
        if (sim->parsed()) {
            PathSpec path = parse_path(path_spec);
            if (!grid_spec.empty())
                path.t_grid = parse_grid(grid_spec);
            const Matrix A = need(Af, "--A");
            const GrowthReport rep = simulate(path, A, parse_phi(phi_spec, A.rows()));
            if (!csv.empty()) {
                std::ostringstream os;
                os.precision(17);
                os << "t,norm\n";
                for (std::size_t k = 0; k < rep.t_values.size(); ++k)
                    os << rep.t_values[k] << ',' << rep.norms[k] << '\n';
                write_file(csv, os.str());
            }
            emit(growth_to_json(rep), out);
            return 0;
        }
        if (suite->parsed()) {
            SuiteConfig cfg;
            cfg.cases = cases;
            const SuiteReport rep = run_suite(suite_id, need_seed(seed, "suite"), cfg);
            emit(suite_report_to_json(rep), out);
            if (rep.passed())
                return 0;
            const auto& ids = suite_ids();
            return kExitSuiteBase +
                   static_cast<int>(std::find(ids.begin(), ids.end(), suite_id) - ids.begin());
        }
        if (conv->parsed()) {
            std::string from = "json";
            if (in.size() >= 4 && in.substr(in.size() - 4) == ".csv")
                from = "csv";
            const std::string text = convert_matrix_text(read_file(in), from, to, in);
            if (out.empty() || out == "-")
                std::cout << text;
            else
                write_file(out, text);
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "conjlim: " << error_kind_name(e.kind()) << ": " << e.what() << "\n";
        switch (e.kind()) {
        case ErrorKind::InvalidInput:
        case ErrorKind::Parse:
        case ErrorKind::UnknownSuite:
        case ErrorKind::NotPsd:
        case ErrorKind::PreconditionViolation:
            return kExitInput;
        default:
            return kExitRuntime;
        }
    } catch (const std::exception& e) {
        std::cerr << "conjlim: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
