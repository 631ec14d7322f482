#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "liesym/errors.hpp"

namespace liesym {

/// Symbol table an expression is interpreted against: independent variables
/// (in axis order), the dependent variable, parameters, and unknown functions
/// with their declared argument lists. Names are pairwise distinct across the
/// four categories; "exp" is reserved.
class Context {
public:
    Context() = default;

    void add_indep(const std::string& name) {
        reserve_name(name);
        indep_.push_back(name);
    }
    void set_dep(const std::string& name) {
        if (!dep_.empty()) throw EngineError("dependent variable already set");
        reserve_name(name);
        dep_ = name;
    }
    void add_param(const std::string& name) {
        reserve_name(name);
        params_.push_back(name);
    }
    void add_unknown(const std::string& name, const std::vector<std::string>& args) {
        reserve_name(name);
        for (const auto& a : args) {
            if (a != dep_ && axis_of(a) < 0)
                throw EngineError("unknown function '" + name + "': argument '" + a +
                                  "' is not a declared variable");
        }
        unknown_order_.push_back(name);
        unknowns_[name] = args;
    }

    static Context make(std::vector<std::string> indep, std::string dep,
                        std::vector<std::string> params = {},
                        std::vector<std::pair<std::string, std::vector<std::string>>> unknowns = {}) {
        Context c;
        for (auto& v : indep) c.add_indep(v);
        c.set_dep(dep);
        for (auto& p : params) c.add_param(p);
        for (auto& [n, a] : unknowns) c.add_unknown(n, a);
        return c;
    }

    std::size_t dim() const { return indep_.size(); }
    const std::vector<std::string>& indep_vars() const { return indep_; }
    const std::string& dep_var() const { return dep_; }
    const std::vector<std::string>& params() const { return params_; }
    const std::vector<std::string>& unknown_names() const { return unknown_order_; }

    int axis_of(const std::string& name) const {
        auto it = std::find(indep_.begin(), indep_.end(), name);
        return it == indep_.end() ? -1 : static_cast<int>(it - indep_.begin());
    }
    bool is_dep(const std::string& name) const { return !dep_.empty() && name == dep_; }
    int param_id(const std::string& name) const {
        auto it = std::find(params_.begin(), params_.end(), name);
        return it == params_.end() ? -1 : static_cast<int>(it - params_.begin());
    }
    bool is_unknown(const std::string& name) const { return unknowns_.count(name) > 0; }
    const std::vector<std::string>& unknown_args(const std::string& name) const {
        auto it = unknowns_.find(name);
        if (it == unknowns_.end()) throw EngineError("undeclared function '" + name + "'");
        return it->second;
    }
    /// True when every argument of the unknown function is an independent
    /// variable (no dependence on the dependent variable).
    bool unknown_is_x_only(const std::string& name) const {
        for (const auto& a : unknown_args(name))
            if (a == dep_) return false;
        return true;
    }

    bool has_name(const std::string& name) const {
        return axis_of(name) >= 0 || is_dep(name) || param_id(name) >= 0 || is_unknown(name) ||
               name == "exp";
    }

    std::string fresh_name(const std::string& base) const {
        if (!has_name(base)) return base;
        for (int i = 2;; ++i) {
            std::string cand = base + "_" + std::to_string(i);
            if (!has_name(cand)) return cand;
        }
    }

    /// Same geometry: identical independent variables, dependent variable and
    /// parameters. Unknown-function declarations may differ.
    bool compatible_with(const Context& o) const {
        return indep_ == o.indep_ && dep_ == o.dep_ && params_ == o.params_;
    }

private:
    std::vector<std::string> indep_;
    std::string dep_;
    std::vector<std::string> params_;
    std::vector<std::string> unknown_order_;
    std::map<std::string, std::vector<std::string>> unknowns_;

    void reserve_name(const std::string& name) {
        if (name.empty()) throw EngineError("empty name");
        if (has_name(name)) throw EngineError("name '" + name + "' already declared");
    }
};

using ContextPtr = std::shared_ptr<const Context>;

}  // namespace liesym
