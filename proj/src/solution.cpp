#include "epd/solution.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace epd {

namespace {

double interp_linear(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (xs.empty()) return 0.0;
    if (x <= xs.front() || x >= xs.back()) {
        // Compact support: zero outside the table.
        if (x < xs.front() || x > xs.back()) return 0.0;
    }
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return ys.front();
    if (it == xs.end()) return ys.back();
    const size_t i = static_cast<size_t>(it - xs.begin());
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

}  // namespace

void SolutionSpec::validate() const {
    if (nodes < 16) throw DomainError("spec: nodes must be at least 16");
    if (const auto* d = std::get_if<DeltaSpec>(&density)) {
        for (const auto& t : d->phi)
            if (!std::isfinite(t.weight) || !std::isfinite(t.node))
                throw DomainError("spec: non-finite delta term");
        for (const auto& t : d->psi)
            if (!std::isfinite(t.weight) || !std::isfinite(t.node))
                throw DomainError("spec: non-finite delta term");
    } else if (const auto* s = std::get_if<SampledSpec>(&density)) {
        if (!(s->a < s->b)) throw DomainError("spec: sampled support requires a < b");
        if (s->cells < 1 || s->order < 2) throw DomainError("spec: bad sampled quadrature");
    }
}

std::string SolutionSpec::to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["log_two_i"] = log_two_i;
    j["nodes"] = nodes;
    if (const auto* m = std::get_if<MonomialSpec>(&density)) {
        j["variant"] = "monomial";
        j["x"] = m->x;
        j["y"] = m->y;
    } else if (const auto* p = std::get_if<InversePowerSpec>(&density)) {
        j["variant"] = "inverse";
        j["x"] = p->x;
        j["y"] = p->y;
    } else if (const auto* d = std::get_if<DeltaSpec>(&density)) {
        j["variant"] = "delta";
        auto dump = [](const std::vector<DeltaSpec::Term>& ts) {
            nlohmann::json a = nlohmann::json::array();
            for (const auto& t : ts) a.push_back({t.weight, t.node});
            return a;
        };
        j["phi"] = dump(d->phi);
        j["psi"] = dump(d->psi);
    } else if (const auto* s = std::get_if<SampledSpec>(&density)) {
        j["variant"] = "sampled";
        j["support"] = {s->a, s->b};
        j["cells"] = s->cells;
        j["order"] = s->order;
        j["lambda"] = s->table_lambda;
        j["phi"] = s->table_phi;
        j["psi"] = s->table_psi;
    }
    return j.dump();
}

SolutionSpec SolutionSpec::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("schema", 1) != 1) throw DomainError("spec json: unsupported schema");
    SolutionSpec spec;
    spec.log_two_i = j.value("log_two_i", false);
    spec.nodes = j.value("nodes", 256);
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "monomial") {
        MonomialSpec m;
        m.x = j.value("x", std::vector<double>{});
        m.y = j.value("y", std::vector<double>{});
        spec.density = m;
    } else if (variant == "inverse") {
        InversePowerSpec p;
        p.x = j.value("x", std::vector<double>{});
        p.y = j.value("y", std::vector<double>{});
        spec.density = p;
    } else if (variant == "delta") {
        DeltaSpec d;
        auto load = [](const nlohmann::json& a) {
            std::vector<DeltaSpec::Term> ts;
            for (const auto& e : a) ts.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
            return ts;
        };
        d.phi = load(j.value("phi", nlohmann::json::array()));
        d.psi = load(j.value("psi", nlohmann::json::array()));
        spec.density = d;
    } else if (variant == "sampled") {
        SampledSpec s;
        const auto sup = j.at("support");
        s.a = sup.at(0).get<double>();
        s.b = sup.at(1).get<double>();
        s.cells = j.value("cells", 48);
        s.order = j.value("order", 8);
        s.table_lambda = j.value("lambda", std::vector<double>{});
        s.table_phi = j.value("phi", std::vector<double>{});
        s.table_psi = j.value("psi", std::vector<double>{});
        if (!s.table_lambda.empty()) {
            auto xs = s.table_lambda;
            auto fp = s.table_phi, fs = s.table_psi;
            if (!fp.empty()) s.phi = [xs, fp](double l) { return interp_linear(xs, fp, l); };
            if (!fs.empty()) s.psi = [xs, fs](double l) { return interp_linear(xs, fs, l); };
        }
        spec.density = s;
    } else {
        throw DomainError("spec json: unknown variant '" + variant + "'");
    }
    spec.validate();
    return spec;
}

SolutionSpec unit_basis(const SolutionSpec& parent, const std::string& family, int index) {
    SolutionSpec spec;
    spec.log_two_i = parent.log_two_i;
    spec.nodes = parent.nodes;
    spec.force_quadrature = parent.force_quadrature;
    if (family == "monomial-x") {
        if (index < 1) throw DomainError("unit_basis: monomial-x index starts at 1");
        MonomialSpec m;
        m.x.assign(index, 0.0);
        m.x[index - 1] = 1.0;
        spec.density = m;
    } else if (family == "monomial-y") {
        if (index < 0) throw DomainError("unit_basis: bad monomial-y index");
        MonomialSpec m;
        m.y.assign(index + 1, 0.0);
        m.y[index] = 1.0;
        spec.density = m;
    } else if (family == "inverse-x" || family == "inverse-y") {
        if (index < 1) throw DomainError("unit_basis: inverse index starts at 1");
        InversePowerSpec p;
        auto& v = (family == "inverse-x") ? p.x : p.y;
        v.assign(index, 0.0);
        v[index - 1] = 1.0;
        spec.density = p;
    } else if (family == "delta-phi" || family == "delta-psi") {
        const auto* d = std::get_if<DeltaSpec>(&parent.density);
        if (!d) throw DomainError("unit_basis: delta family needs a delta parent");
        const auto& terms = (family == "delta-phi") ? d->phi : d->psi;
        if (index < 0 || index >= static_cast<int>(terms.size()))
            throw DomainError("unit_basis: delta index out of range");
        DeltaSpec u;
        DeltaSpec::Term t{1.0, terms[static_cast<size_t>(index)].node};
        if (family == "delta-phi") u.phi.push_back(t); else u.psi.push_back(t);
        spec.density = u;
    } else {
        throw DomainError("unit_basis: unknown family '" + family + "'");
    }
    return spec;
}

double& coefficient(SolutionSpec& spec, const std::string& family, int index) {
    if (family == "monomial-x" || family == "monomial-y") {
        auto* m = std::get_if<MonomialSpec>(&spec.density);
        if (!m) throw DomainError("coefficient: spec is not monomial");
        if (family == "monomial-x") {
            if (index < 1) throw DomainError("coefficient: monomial-x index starts at 1");
            if (static_cast<int>(m->x.size()) < index) m->x.resize(static_cast<size_t>(index), 0.0);
            return m->x[static_cast<size_t>(index - 1)];
        }
        if (index < 0) throw DomainError("coefficient: bad monomial-y index");
        if (static_cast<int>(m->y.size()) <= index) m->y.resize(static_cast<size_t>(index) + 1, 0.0);
        return m->y[static_cast<size_t>(index)];
    }
    if (family == "inverse-x" || family == "inverse-y") {
        auto* p = std::get_if<InversePowerSpec>(&spec.density);
        if (!p) throw DomainError("coefficient: spec is not inverse-power");
        auto& v = (family == "inverse-x") ? p->x : p->y;
        if (index < 1) throw DomainError("coefficient: inverse index starts at 1");
        if (static_cast<int>(v.size()) < index) v.resize(static_cast<size_t>(index), 0.0);
        return v[static_cast<size_t>(index - 1)];
    }
    if (family == "delta-phi" || family == "delta-psi") {
        auto* d = std::get_if<DeltaSpec>(&spec.density);
        if (!d) throw DomainError("coefficient: spec is not delta");
        auto& terms = (family == "delta-phi") ? d->phi : d->psi;
        if (index < 0 || index >= static_cast<int>(terms.size()))
            throw DomainError("coefficient: delta index out of range");
        return terms[static_cast<size_t>(index)].weight;
    }
    throw DomainError("coefficient: unknown family '" + family + "'");
}

}  // namespace epd
