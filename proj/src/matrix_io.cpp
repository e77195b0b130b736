#include "conjlim/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace conjlim {

namespace {

[[noreturn]] void parse_fail(const std::string& msg)
{
    throw Error(ErrorKind::Parse, msg);
}

std::string shortest(double x)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

bool parse_double(const std::string& s, double& out)
{
    if (s.empty())
        return false;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    if (*b == '+')
        ++b;
    auto res = std::from_chars(b, e, out);
    return res.ec == std::errc() && res.ptr == e;
}

bool parse_complex(std::string f, cplx& out)
{
    // trim
    const auto first = f.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return false;
    f = f.substr(first, f.find_last_not_of(" \t\r") - first + 1);
    double re = 0.0, im = 0.0;
    if (f.back() != 'j' && f.back() != 'i') {
        if (!parse_double(f, re))
            return false;
        out = {re, 0.0};
        return true;
    }
    f.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t i = f.size(); i-- > 1;) {
        if ((f[i] == '+' || f[i] == '-') && f[i - 1] != 'e' && f[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) {
        if (!parse_double(f, im))
            return false;
        out = {0.0, im};
        return true;
    }
    if (!parse_double(f.substr(0, split), re) || !parse_double(f.substr(split), im))
        return false;
    out = {re, im};
    return true;
}

} // namespace

json matrix_to_json(const Matrix& M)
{
    json data = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j)
            data.push_back({M(i, j).real(), M(i, j).imag()});
    return {{"rows", M.rows()}, {"cols", M.cols()}, {"data", data}};
}

Matrix matrix_from_json(const json& j, const std::string& where)
{
    if (!j.is_object())
        parse_fail(where + ": expected an object with rows, cols, data");
    for (const char* key : {"rows", "cols", "data"})
        if (!j.contains(key))
            parse_fail(where + ": missing field '" + key + "'");
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
        parse_fail(where + ": rows and cols must be integers");
    const long r = j["rows"].get<long>();
    const long c = j["cols"].get<long>();
    if (r <= 0 || c <= 0)
        parse_fail(where + ": rows and cols must be positive");
    const json& data = j["data"];
    if (!data.is_array() || static_cast<long>(data.size()) != r * c) {
        std::ostringstream os;
        os << where << ".data: expected " << r * c << " entries";
        parse_fail(os.str());
    }
    Matrix M(r, c);
    for (long k = 0; k < r * c; ++k) {
        const json& e = data[static_cast<std::size_t>(k)];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            std::ostringstream os;
            os << where << ".data[" << k << "]: expected [re, im]";
            parse_fail(os.str());
        }
        M(k / c, k % c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
    return M;
}

json goodpath_to_json(const GoodPath& gp, const Tolerance& tol)
{
    json E = json::array(), C = json::array();
    for (const Matrix& e : gp.E)
        E.push_back(matrix_to_json(e));
    for (const Matrix& c : gp.Cpos)
        C.push_back(matrix_to_json(c));
    return {{"Z", matrix_to_json(gp.Z)}, {"E", E},         {"Cneg", matrix_to_json(gp.Cneg)},
            {"Cpos", C},                 {"order", gp.order}, {"pole_free", gp.pole_free(tol)}};
}

GoodPath goodpath_from_json(const json& j)
{
    if (!j.is_object())
        parse_fail("goodpath: expected an object");
    for (const char* key : {"Z", "E", "Cneg", "Cpos", "order"})
        if (!j.contains(key))
            parse_fail(std::string("goodpath: missing field '") + key + "'");
    GoodPath gp;
    gp.Z = matrix_from_json(j["Z"], "goodpath.Z");
    for (std::size_t i = 0; i < j["E"].size(); ++i)
        gp.E.push_back(matrix_from_json(j["E"][i], "goodpath.E[" + std::to_string(i) + "]"));
    gp.Cneg = matrix_from_json(j["Cneg"], "goodpath.Cneg");
    for (std::size_t i = 0; i < j["Cpos"].size(); ++i)
        gp.Cpos.push_back(matrix_from_json(j["Cpos"][i], "goodpath.Cpos[" + std::to_string(i) + "]"));
    gp.order = j["order"].get<int>();
    return gp;
}

json verdict_to_json(const MembershipVerdict& v)
{
    json j = {{"member", v.member}, {"residual", v.residual}, {"threshold", v.threshold}};
    if (v.witness)
        j["witness"] = matrix_to_json(*v.witness);
    if (v.randomized)
        j["randomized"] = true;
    return j;
}

json growth_to_json(const GrowthReport& rep)
{
    return {{"t_values", rep.t_values}, {"norms", rep.norms},       {"alpha", rep.alpha},
            {"r2", rep.r2},             {"verdict", verdict_name(rep.verdict)},
            {"max_norm", rep.max_norm}, {"min_norm", rep.min_norm}};
}

json parse_json_text(const std::string& text, const std::string& source)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << source << ":" << line << ":" << col << ": malformed JSON (" << e.what() << ")";
        parse_fail(os.str());
    }
}

std::string matrix_to_csv(const Matrix& M)
{
    std::string out;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j)
                out += ',';
            const cplx z = M(i, j);
            out += shortest(z.real());
            if (z.imag() != 0.0 || std::signbit(z.imag())) {
                const std::string im = shortest(z.imag());
                if (im.front() != '-')
                    out += '+';
                out += im;
                out += 'j';
            }
        }
        out += '\n';
    }
    return out;
}

Matrix matrix_from_csv(const std::string& text, const std::string& source)
{
    std::vector<std::vector<cplx>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        std::vector<cplx> row;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            const std::string field =
                line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            cplx z;
            if (!parse_complex(field, z)) {
                std::ostringstream os;
                os << source << ":" << lineno << ":" << start + 1 << ": malformed entry '" << field
                   << "'";
                parse_fail(os.str());
            }
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                std::ostringstream os;
                os << source << ":" << lineno << ":" << start + 1 << ": non-finite entry";
                parse_fail(os.str());
            }
            row.push_back(z);
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            std::ostringstream os;
            os << source << ":" << lineno << ":1: expected " << rows.front().size()
               << " entries, found " << row.size();
            parse_fail(os.str());
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        parse_fail(source + ":1:1: empty matrix");
    Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return M;
}

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error(ErrorKind::InvalidInput, "cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error(ErrorKind::InvalidInput, "cannot write " + path);
    f << content;
}

Matrix load_matrix(const std::string& path)
{
    const std::string text = read_file(path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
        return matrix_from_csv(text, path);
    return matrix_from_json(parse_json_text(text, path), path);
}

std::string convert_matrix_text(const std::string& text, const std::string& from,
                                const std::string& to, const std::string& source)
{
    Matrix M;
    if (from == "json")
        M = matrix_from_json(parse_json_text(text, source), source);
    else if (from == "csv")
        M = matrix_from_csv(text, source);
    else
        throw Error(ErrorKind::InvalidInput, "convert: unknown input format " + from);
    if (to == "json")
        return matrix_to_json(M).dump(2) + "\n";
    if (to == "csv")
        return matrix_to_csv(M);
    throw Error(ErrorKind::InvalidInput, "convert: unknown output format " + to);
}

} // namespace conjlim
