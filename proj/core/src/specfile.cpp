#include "lvn/specfile.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

namespace lvn {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string token;
    for (const char c : value) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!token.empty()) out.push_back(std::move(token));
            token.clear();
        } else {
            token += c;
        }
    }
    if (!token.empty()) out.push_back(std::move(token));
    return out;
}

struct Entry {
    std::string value;
    int line;
    mutable bool used = false;
};

using Section = std::map<std::string, Entry>;

double to_double(const Entry& e, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw SpecFileError("key '" + key + "': expected a number, got '" + e.value + "'", e.line);
    }
}

long to_long(const Entry& e, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw SpecFileError("key '" + key + "': expected an integer, got '" + e.value + "'",
                            e.line);
    }
}

class Sections {
public:
    void add(const std::string& section, const std::string& key, std::string value, int line) {
        auto [it, inserted] = data_[section].emplace(key, Entry{std::move(value), line});
        if (!inserted)
            throw SpecFileError("duplicate key '" + key + "' in [" + section + "]", line);
        lines_.emplace(section, line);
    }

    bool has(const std::string& section) const { return data_.count(section) > 0; }

    const Entry* find(const std::string& section, const std::string& key) const {
        auto sit = data_.find(section);
        if (sit == data_.end()) return nullptr;
        auto kit = sit->second.find(key);
        if (kit == sit->second.end()) return nullptr;
        kit->second.used = true;
        return &kit->second;
    }

    const Entry& require(const std::string& section, const std::string& key) const {
        const Entry* e = find(section, key);
        if (!e)
            throw SpecFileError("missing key '" + key + "' in [" + section + "]",
                                section_line(section));
        return *e;
    }

    int section_line(const std::string& section) const {
        auto it = lines_.find(section);
        return it == lines_.end() ? 1 : it->second;
    }

    const Section* section(const std::string& name) const {
        auto it = data_.find(name);
        return it == data_.end() ? nullptr : &it->second;
    }

    void reject_unused() const {
        for (const auto& [section, entries] : data_)
            for (const auto& [key, entry] : entries)
                if (!entry.used)
                    throw SpecFileError("unknown key '" + key + "' in [" + section +
                                            "] (strict mode)",
                                        entry.line);
    }

private:
    std::map<std::string, Section> data_;
    std::map<std::string, int> lines_;
};

Sections tokenize(std::string_view text) {
    static const std::vector<std::string> known_sections = {
        "fixture", "hamiltonian", "operator", "ladder", "tolerances", "evolution"};
    Sections out;
    std::string current;
    int line_no = 0;
    std::istringstream stream{std::string(text)};
    std::string raw;
    while (std::getline(stream, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw SpecFileError("malformed section header '" + line + "'", line_no);
            current = trim(line.substr(1, line.size() - 2));
            if (std::find(known_sections.begin(), known_sections.end(), current) ==
                known_sections.end())
                throw SpecFileError("unknown section [" + current + "] (strict mode)", line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SpecFileError("expected 'key = value', got '" + line + "'", line_no);
        if (current.empty())
            throw SpecFileError("key outside any section: '" + line + "'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw SpecFileError("empty key", line_no);
        if (value.empty()) throw SpecFileError("empty value for key '" + key + "'", line_no);
        out.add(current, key, value, line_no);
    }
    return out;
}

dsl::ExprPtr parse_expr(const Entry& e, const std::string& key,
                        const std::vector<std::string>& vars) {
    try {
        return dsl::parse(e.value, vars);
    } catch (const ParseError& err) {
        throw SpecFileError("key '" + key + "': " + err.what(), e.line);
    }
}

HamiltonianModel build_hamiltonian(const Sections& s) {
    const Entry& kind = s.require("hamiltonian", "kind");
    std::string descriptor;
    if (const Entry* d = s.find("hamiltonian", "descriptor")) descriptor = d->value;
    if (kind.value == "diagonal") {
        const Entry& lambda = s.require("hamiltonian", "lambda");
        if (descriptor.empty()) descriptor = "lambda(n)=" + lambda.value;
        return HamiltonianModel::diagonal(parse_expr(lambda, "lambda", {"n"}), descriptor);
    }
    if (kind.value == "hermitian") {
        const Entry& re = s.require("hamiltonian", "a_re");
        dsl::ExprPtr im = dsl::number(0.0);
        std::string im_src = "0";
        if (const Entry* e = s.find("hamiltonian", "a_im")) {
            im = parse_expr(*e, "a_im", {"m", "n"});
            im_src = e->value;
        }
        if (descriptor.empty()) descriptor = "a(m,n)=" + re.value + " + i*(" + im_src + ")";
        return HamiltonianModel::hermitian(parse_expr(re, "a_re", {"m", "n"}), std::move(im),
                                           descriptor);
    }
    throw SpecFileError("hamiltonian kind must be 'diagonal' or 'hermitian', got '" + kind.value +
                            "'",
                        kind.line);
}

OperatorModel build_operator(const Sections& s, const HamiltonianModel& h) {
    const Entry& kind = s.require("operator", "kind");
    std::string descriptor;
    if (const Entry* d = s.find("operator", "descriptor")) descriptor = d->value;

    if (kind.value == "element_rule") {
        const Entry& re = s.require("operator", "a_re");
        dsl::ExprPtr im = dsl::number(0.0);
        std::string im_src = "0";
        if (const Entry* e = s.find("operator", "a_im")) {
            im = parse_expr(*e, "a_im", {"m", "n"});
            im_src = e->value;
        }
        if (descriptor.empty()) descriptor = "a(m,n)=" + re.value + " + i*(" + im_src + ")";
        return OperatorModel::element_rule(parse_expr(re, "a_re", {"m", "n"}), std::move(im),
                                           descriptor);
    }
    if (kind.value == "rank_sum") {
        const long terms = to_long(s.require("operator", "terms"), "terms");
        if (terms < 1) throw SpecFileError("rank_sum needs terms >= 1", kind.line);
        std::vector<OperatorModel::RankTerm> list;
        for (long j = 1; j <= terms; ++j) {
            const std::string suffix = "." + std::to_string(j);
            double are = 1.0, aim = 0.0;
            if (const Entry* e = s.find("operator", "alpha_re" + suffix)) are = to_double(*e, "alpha_re" + suffix);
            if (const Entry* e = s.find("operator", "alpha_im" + suffix)) aim = to_double(*e, "alpha_im" + suffix);
            const Entry& psi = s.require("operator", "psi" + suffix);
            const Entry& phi = s.require("operator", "phi" + suffix);
            list.push_back({Complex(are, aim), parse_expr(psi, "psi" + suffix, {"n"}),
                            parse_expr(phi, "phi" + suffix, {"n"})});
        }
        return OperatorModel::rank_sum(std::move(list),
                                       descriptor.empty() ? "rank-sum" : descriptor);
    }
    if (kind.value == "explicit") {
        const long dim = to_long(s.require("operator", "dim"), "dim");
        if (dim < 1) throw SpecFileError("explicit operator needs dim >= 1", kind.line);
        Matrix m = Matrix::Zero(dim, dim);
        const Section* sec = s.section("operator");
        for (const auto& [key, entry] : *sec) {
            if (key.rfind("entry.", 0) != 0) continue;
            entry.used = true;
            const auto rest = key.substr(6);
            const auto dot = rest.find('.');
            if (dot == std::string::npos)
                throw SpecFileError("entry keys look like entry.<m>.<n>", entry.line);
            long row = 0, col = 0;
            try {
                row = std::stol(rest.substr(0, dot));
                col = std::stol(rest.substr(dot + 1));
            } catch (const std::exception&) {
                throw SpecFileError("entry keys look like entry.<m>.<n>", entry.line);
            }
            if (row < 1 || row > dim || col < 1 || col > dim)
                throw SpecFileError("entry index outside 1..dim", entry.line);
            const auto parts = split_list(entry.value);
            if (parts.empty() || parts.size() > 2)
                throw SpecFileError("entry value must be 're' or 're im'", entry.line);
            try {
                const double re = std::stod(parts[0]);
                const double im = parts.size() == 2 ? std::stod(parts[1]) : 0.0;
                m(row - 1, col - 1) = Complex(re, im);
            } catch (const std::exception&) {
                throw SpecFileError("entry value must be numeric", entry.line);
            }
        }
        return OperatorModel::explicit_matrix(TruncatedMatrix(std::move(m)),
                                              descriptor.empty() ? "explicit" : descriptor);
    }
    if (kind.value == "gibbs") {
        const double beta = to_double(s.require("operator", "beta"), "beta");
        if (!h.is_diagonal())
            throw SpecFileError("gibbs operator requires a diagonal hamiltonian", kind.line);
        return OperatorModel::gibbs(beta, h, descriptor);
    }
    if (kind.value == "inverse_hamiltonian") {
        if (!h.is_diagonal())
            throw SpecFileError("inverse_hamiltonian requires a diagonal hamiltonian", kind.line);
        return OperatorModel::inverse_hamiltonian(h, descriptor);
    }
    throw SpecFileError("operator kind must be one of element_rule, rank_sum, explicit, gibbs, "
                        "inverse_hamiltonian; got '" +
                            kind.value + "'",
                        kind.line);
}

TruncationLadder build_ladder(const Sections& s) {
    TruncationLadder ladder = TruncationLadder::defaults();
    if (!s.has("ladder")) return ladder;
    if (const Entry* dims = s.find("ladder", "dims")) {
        ladder.dims.clear();
        for (const auto& token : split_list(dims->value)) {
            try {
                ladder.dims.push_back(std::stoi(token));
            } catch (const std::exception&) {
                throw SpecFileError("ladder dims must be integers, got '" + token + "'",
                                    dims->line);
            }
        }
    }
    if (const Entry* pad = s.find("ladder", "pad_factor"))
        ladder.pad_factor = to_double(*pad, "pad_factor");
    try {
        ladder.validate();
    } catch (const ShapeError& e) {
        throw SpecFileError(e.what(), s.section_line("ladder"));
    }
    return ladder;
}

Tolerances build_tolerances(const Sections& s) {
    Tolerances tol;
    if (!s.has("tolerances")) return tol;
    if (const Entry* e = s.find("tolerances", "conv")) tol.conv_tol = to_double(*e, "conv");
    if (const Entry* e = s.find("tolerances", "fit")) tol.fit_tol = to_double(*e, "fit");
    if (tol.conv_tol <= 0 || tol.fit_tol <= 0)
        throw SpecFileError("tolerances must be positive", s.section_line("tolerances"));
    return tol;
}

std::optional<SpecFile::Evolution> build_evolution(const Sections& s) {
    if (!s.has("evolution")) return std::nullopt;
    SpecFile::Evolution evo;
    const int line = s.section_line("evolution");

    const Entry* times = s.find("evolution", "times");
    const Entry* t_max = s.find("evolution", "t_max");
    const Entry* steps = s.find("evolution", "steps");
    if (times && (t_max || steps))
        throw SpecFileError("give either times or (t_max, steps), not both", times->line);
    if (times) {
        for (const auto& token : split_list(times->value)) {
            try {
                evo.times.push_back(std::stod(token));
            } catch (const std::exception&) {
                throw SpecFileError("times must be numbers, got '" + token + "'", times->line);
            }
        }
    } else {
        if (!t_max || !steps)
            throw SpecFileError("evolution needs times or both t_max and steps", line);
        const double tm = to_double(*t_max, "t_max");
        const long n = to_long(*steps, "steps");
        if (tm <= 0 || n < 1) throw SpecFileError("need t_max > 0 and steps >= 1", t_max->line);
        for (long i = 0; i <= n; ++i) evo.times.push_back(tm * static_cast<double>(i) / n);
    }
    if (evo.times.empty() || evo.times.front() != 0.0)
        throw SpecFileError("evolution times must start at 0", line);
    for (std::size_t i = 1; i < evo.times.size(); ++i)
        if (evo.times[i] <= evo.times[i - 1])
            throw SpecFileError("evolution times must be strictly increasing", line);

    const Entry& method = s.require("evolution", "method");
    for (const auto& token : split_list(method.value)) {
        const auto m = evolve_method_from_string(token);
        if (!m)
            throw SpecFileError("unknown method '" + token +
                                    "' (spectral-exact, vectorized-expm, rk4)",
                                method.line);
        evo.methods.push_back(*m);
    }
    if (evo.methods.empty()) throw SpecFileError("evolution needs at least one method", method.line);

    if (const Entry* d = s.find("evolution", "dim")) {
        evo.dim = static_cast<int>(to_long(*d, "dim"));
        if (evo.dim < 1) throw SpecFileError("evolution dim must be >= 1", d->line);
    }
    if (const Entry* h = s.find("evolution", "rk4_step")) {
        evo.rk4_step = to_double(*h, "rk4_step");
        if (evo.rk4_step <= 0) throw SpecFileError("rk4_step must be positive", h->line);
    }
    if (evo.rk4_step == 0.0) evo.rk4_step = evo.times.back() / 128.0;
    return evo;
}

} // namespace

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t hash = 14695981039346656037ull;
    for (const char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

SpecFile parse_spec_text(std::string_view text) {
    const Sections sections = tokenize(text);

    std::optional<HamiltonianModel> h;
    std::optional<OperatorModel> a;
    std::optional<std::string> fixture_id;

    if (sections.has("fixture")) {
        if (sections.has("hamiltonian") || sections.has("operator"))
            throw SpecFileError("[fixture] replaces [hamiltonian] and [operator]; give one or "
                                "the other",
                                sections.section_line("fixture"));
        const Entry& name = sections.require("fixture", "name");
        try {
            const OracleFixture& f = catalog_fixture(name.value);
            h = f.hamiltonian;
            a = f.op;
            fixture_id = f.id;
        } catch (const ShapeError& e) {
            throw SpecFileError(e.what(), name.line);
        }
    } else {
        if (!sections.has("hamiltonian"))
            throw SpecFileError("missing [hamiltonian] section", 1);
        if (!sections.has("operator")) throw SpecFileError("missing [operator] section", 1);
        h = build_hamiltonian(sections);
        a = build_operator(sections, *h);
    }

    TruncationLadder ladder = build_ladder(sections);
    Tolerances tol = build_tolerances(sections);
    auto evolution = build_evolution(sections);

    sections.reject_unused();

    return SpecFile{std::move(*h),     std::move(*a), std::move(ladder), tol,
                    std::move(evolution), std::move(fixture_id), fnv1a64_hex(text)};
}

SpecFile parse_spec_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecFileError("cannot open spec file '" + path + "'", 0);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_spec_text(buffer.str());
}

} // namespace lvn
