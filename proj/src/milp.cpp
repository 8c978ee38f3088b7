#include "microplan/milp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "microplan/types.hpp"

namespace microplan {

namespace {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

int MilpInstance::add_var(std::string name, VarKind kind, double lb, double ub, double obj) {
    if (!var_names_.emplace(name, num_vars()).second)
        throw ModelError("duplicate variable name: " + name);
    if (kind == VarKind::binary) {
        lb = std::max(lb, 0.0);
        ub = std::min(ub, 1.0);
    }
    vars_.push_back({std::move(name), kind, lb, ub, obj});
    return num_vars() - 1;
}

int MilpInstance::add_row(std::string name, double lo, double hi,
                          std::vector<std::pair<int, double>> terms) {
    if (!row_names_.emplace(name, num_rows()).second)
        throw ModelError("duplicate row name: " + name);
    // Combine duplicate variable references, keep first-seen order.
    std::vector<std::pair<int, double>> combined;
    combined.reserve(terms.size());
    for (const auto& [v, c] : terms) {
        if (v < 0 || v >= num_vars())
            throw ModelError("row " + name + " references undeclared variable");
        auto it = std::find_if(combined.begin(), combined.end(),
                               [v](const auto& t) { return t.first == v; });
        if (it == combined.end())
            combined.emplace_back(v, c);
        else
            it->second += c;
    }
    rows_.push_back({std::move(name), lo, hi, std::move(combined)});
    return num_rows() - 1;
}

int MilpInstance::var_id(const std::string& name) const {
    auto it = var_names_.find(name);
    if (it == var_names_.end()) throw ModelError("unknown variable: " + name);
    return it->second;
}

int MilpInstance::row_id(const std::string& name) const {
    auto it = row_names_.find(name);
    if (it == row_names_.end()) throw ModelError("unknown row: " + name);
    return it->second;
}

std::optional<int> MilpInstance::find_var(const std::string& name) const {
    auto it = var_names_.find(name);
    if (it == var_names_.end()) return std::nullopt;
    return it->second;
}

bool MilpInstance::has_integers() const {
    return std::any_of(vars_.begin(), vars_.end(),
                       [](const MilpVar& v) { return v.kind != VarKind::continuous; });
}

double MilpInstance::eval_objective(const std::vector<double>& values) const {
    double total = obj_offset_;
    for (int j = 0; j < num_vars(); ++j) total += vars_[j].obj * values[j];
    return total;
}

double MilpInstance::eval_row(int row, const std::vector<double>& values) const {
    double act = 0.0;
    for (const auto& [v, c] : rows_[row].terms) act += c * values[v];
    return act;
}

void MilpInstance::check_consistency() const {
    if (var_names_.size() != vars_.size()) throw ModelError("variable name map not total");
    if (row_names_.size() != rows_.size()) throw ModelError("row name map not total");
    for (const auto& r : rows_) {
        if (r.lo > r.hi) throw ModelError("row " + r.name + " has lo > hi");
        for (const auto& [v, c] : r.terms) {
            if (v < 0 || v >= num_vars())
                throw ModelError("row " + r.name + " references undeclared variable");
            if (!std::isfinite(c)) throw ModelError("row " + r.name + " has non-finite coefficient");
        }
    }
    for (const auto& v : vars_)
        if (v.lb > v.ub) throw ModelError("variable " + v.name + " has lb > ub");
}

void MilpInstance::write_lp(std::ostream& os) const {
    os << "\\ microplan model export\n";
    os << "Minimize\n obj:";
    bool first = true;
    for (int j = 0; j < num_vars(); ++j) {
        if (vars_[j].obj == 0.0) continue;
        os << (first ? " " : (vars_[j].obj >= 0 ? " + " : " ")) << fmt_num(vars_[j].obj) << " x"
           << j;
        first = false;
    }
    if (first) os << " 0 " << (num_vars() ? vars_[0].name : "x0");
    os << "\nSubject To\n";
    auto write_terms = [&os](const MilpRow& r) {
        bool lead = true;
        for (const auto& [v, c] : r.terms) {
            os << (lead ? " " : (c >= 0 ? " + " : " ")) << fmt_num(c) << " x" << v;
            lead = false;
        }
        if (lead) os << " 0 x0";
    };
    for (const auto& r : rows_) {
        const bool has_lo = std::isfinite(r.lo), has_hi = std::isfinite(r.hi);
        if (has_lo && has_hi && r.lo == r.hi) {
            os << " " << r.name << ":";
            write_terms(r);
            os << " = " << fmt_num(r.lo) << "\n";
            continue;
        }
        if (has_hi) {
            os << " " << r.name << "_hi:";
            write_terms(r);
            os << " <= " << fmt_num(r.hi) << "\n";
        }
        if (has_lo) {
            os << " " << r.name << "_lo:";
            write_terms(r);
            os << " >= " << fmt_num(r.lo) << "\n";
        }
    }
    os << "Bounds\n";
    for (int j = 0; j < num_vars(); ++j) {
        const auto& v = vars_[j];
        if (std::isfinite(v.lb) && std::isfinite(v.ub))
            os << " " << fmt_num(v.lb) << " <= x" << j << " <= " << fmt_num(v.ub) << "\n";
        else if (std::isfinite(v.lb))
            os << " x" << j << " >= " << fmt_num(v.lb) << "\n";
        else if (std::isfinite(v.ub))
            os << " -inf <= x" << j << " <= " << fmt_num(v.ub) << "\n";
        else
            os << " x" << j << " free\n";
    }
    bool any_int = false;
    for (const auto& v : vars_) any_int |= v.kind != VarKind::continuous;
    if (any_int) {
        os << "Generals\n";
        for (int j = 0; j < num_vars(); ++j)
            if (vars_[j].kind != VarKind::continuous) os << " x" << j << "\n";
    }
    os << "\\ name map\n";
    for (int j = 0; j < num_vars(); ++j) os << "\\ x" << j << " = " << vars_[j].name << "\n";
    os << "End\n";
}

std::string key(const char* family, std::initializer_list<long long> idx) {
    std::string s(family);
    s += '(';
    bool first = true;
    for (long long v : idx) {
        if (!first) s += ',';
        s += std::to_string(v);
        first = false;
    }
    s += ')';
    return s;
}

}  // namespace microplan
