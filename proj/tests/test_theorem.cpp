#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace liesym;

TEST_CASE("structure prediction flags") {
    auto ctx = liesym::testing::plane_ctx();
    StructurePrediction s = predict_structure(parse_expr("u[x,x] + u[y,y] + f(u)", *ctx), ctx);
    CHECK(s.semilinear);
    CHECK(s.order == 2);
    CHECK(s.xi_independent_of_u);
    CHECK(s.f_subprincipal_linear);
    CHECK(s.eta_affine_in_u);

    auto hctx = liesym::testing::heat_ctx();
    StructurePrediction h =
        predict_structure(parse_expr("u[t] - u[x,x] - f(u)", *hctx), hctx);
    CHECK(h.semilinear);
    CHECK(h.f_subprincipal_linear);  // the u_t part has constant coefficient
    CHECK(h.eta_affine_in_u);

    // first order: at most xi = xi(x)
    std::vector<std::string> xy = {"x", "y"};
    std::vector<std::string> xyu = {"x", "y", "u"};
    auto fctx = std::make_shared<Context>(
        Context::make({"x", "y"}, "u", {}, {{"A1", xy}, {"A2", xy}, {"g", xyu}}));
    StructurePrediction f = predict_structure(
        parse_expr("A1(x,y)*u[x] + A2(x,y)*u[y] + g(x,y,u)", *fctx), fctx);
    CHECK(f.semilinear);
    CHECK(f.order == 1);
    CHECK(f.xi_independent_of_u);
    CHECK(!f.eta_affine_in_u);

    // not semilinear: every downstream flag off
    StructurePrediction n =
        predict_structure(parse_expr("u*u[x,x] + u[y,y]", *ctx), ctx);
    CHECK(!n.semilinear);
    CHECK(!n.xi_independent_of_u);
    CHECK(!n.eta_affine_in_u);

    // quadratic gradient term below the principal part
    auto qctx = std::make_shared<Context>(Context::make({"t", "x"}, "u"));
    StructurePrediction q =
        predict_structure(parse_expr("u[t] - u[x,x] - u[x]^2", *qctx), qctx);
    CHECK(q.semilinear);
    CHECK(!q.f_subprincipal_linear);
    CHECK(!q.eta_affine_in_u);
}

TEST_CASE("xi_u certificates across coefficient shapes") {
    auto ctx = liesym::testing::plane_ctx();
    SemilinearPDE lap = solve_principal(parse_expr("u[x,x] + u[y,y] + f(u)", *ctx), ctx);
    Certificate c = certify_xi_u(lap);
    CHECK(c.rank == 2);
    CHECK(replay_certificate(c));

    // only one diagonal entry nonzero: the cross monomials still pin xi_u
    auto hctx = liesym::testing::heat_ctx();
    SemilinearPDE heat = solve_principal(parse_expr("u[t] - u[x,x] - f(u)", *hctx), hctx);
    Certificate ch = certify_xi_u(heat);
    CHECK(ch.rank == 2);
    CHECK(replay_certificate(ch));

    // nonconstant coefficient tensor
    auto kctx = std::make_shared<Context>(
        Context::make({"x", "y", "t"}, "u", {}, {{"f", {"u"}}}));
    SemilinearPDE kl = solve_principal(
        parse_expr("u[x,x] + u[y,y] + 4*(x^2+y^2)*u[t,t] + 4*y*u[x,t] - 4*x*u[y,t] + f(u)",
                   *kctx),
        kctx);
    Certificate ck = certify_xi_u(kl);
    CHECK(ck.rank == 3);
    CHECK(replay_certificate(ck));
}

TEST_CASE("eta_uu certificates and their preconditions") {
    auto ctx = liesym::testing::plane_ctx();
    SemilinearPDE lap = solve_principal(parse_expr("u[x,x] + u[y,y] + f(u)", *ctx), ctx);
    Certificate c = certify_eta_uu(lap);
    CHECK(c.rank == 1);
    CHECK(replay_certificate(c));

    auto wctx = liesym::testing::heat_ctx();
    SemilinearPDE wave = solve_principal(parse_expr("u[t,t] - u[x,x] - f(u)", *wctx), wctx);
    CHECK(certify_eta_uu(wave).rank == 1);

    auto qctx = std::make_shared<Context>(Context::make({"t", "x"}, "u"));
    SemilinearPDE grad = solve_principal(parse_expr("u[t] - u[x,x] - u[x]^2", *qctx), qctx);
    CHECK_THROWS_WITH(certify_eta_uu(grad),
                      Catch::Matchers::ContainsSubstring("precondition violated"));

    auto fctx = std::make_shared<Context>(Context::make({"x", "y"}, "u"));
    SemilinearPDE first = solve_principal(parse_expr("u[x] + u[y]", *fctx), fctx);
    CHECK_THROWS_WITH(certify_eta_uu(first),
                      Catch::Matchers::ContainsSubstring("precondition violated"));
}

TEST_CASE("certificate replay rejects tampering") {
    auto ctx = liesym::testing::plane_ctx();
    Certificate c =
        certify_xi_u(solve_principal(parse_expr("u[x,x] + u[y,y] + f(u)", *ctx), ctx));
    REQUIRE(replay_certificate(c));

    Certificate missing = c;
    missing.trace.pop_back();
    CHECK(!replay_certificate(missing));

    Certificate reordered = c;
    if (reordered.trace.size() >= 2) {
        reordered.trace[0].second = reordered.trace[1].second;  // duplicate pivot column
        CHECK(!replay_certificate(reordered));
    }

    Certificate emptied = c;
    emptied.witness.clear();
    CHECK(!replay_certificate(emptied));
}

TEST_CASE("imposing the certified structure reduces the system") {
    auto ctx = std::make_shared<Context>(Context::make({"x", "y"}, "u"));
    SemilinearPDE lap = solve_principal(parse_expr("u[x,x] + u[y,y]", *ctx), ctx);
    DeterminingSystem full = determining_system(lap, Ansatz::Full);
    DeterminingSystem red = ansatz_reduce(full, lap);

    auto contains = [&](const std::string& text) {
        Expr want = detail::scale_to_unit_lead(parse_expr(text, *red.ctx));
        for (const auto& d : red.equations)
            if (d.eq == want) return true;
        return false;
    };
    CHECK(red.ansatz == Ansatz::ThmReduced);
    CHECK(contains("xi1[x] - xi2[y]"));
    CHECK(contains("xi1[y] + xi2[x]"));
    CHECK(contains("beta[x,x] + beta[y,y]"));
    CHECK(contains("alpha[x] - 1/2*xi1[x,x] - 1/2*xi1[y,y]"));

    // already reduced: identity transformation
    DeterminingSystem red2 = ansatz_reduce(red, lap);
    CHECK(red2.equations.size() == red.equations.size());

    // the reduced equations no longer mention u-derivatives of the ansatz
    for (const auto& d : red.equations) {
        bool has_u_deriv = d.eq.contains_atom_if([&](const Atom& a) {
            const auto* ud = std::get_if<UnknownDerivAtom>(&a);
            if (!ud) return false;
            return std::find(ud->args.begin(), ud->args.end(), red.ctx->dep_var()) !=
                   ud->args.end();
        });
        CHECK(!has_u_deriv);
    }
}

TEST_CASE("heat reduction recovers the equation itself for beta") {
    auto zctx = std::make_shared<Context>(Context::make({"t", "x"}, "u"));
    SemilinearPDE heat0 = solve_principal(parse_expr("u[t] - u[x,x]", *zctx), zctx);
    DeterminingSystem red =
        ansatz_reduce(determining_system(heat0, Ansatz::Full), heat0);
    Expr want = detail::scale_to_unit_lead(parse_expr("beta[t] - beta[x,x]", *red.ctx));
    bool found = false;
    for (const auto& d : red.equations)
        if (d.eq == want) found = true;
    CHECK(found);
}

TEST_CASE("first-order reduction keeps eta unconstrained") {
    std::vector<std::string> xy = {"x", "y"};
    auto fctx = std::make_shared<Context>(
        Context::make({"x", "y"}, "u", {"k"}, {}));
    SemilinearPDE first = solve_principal(parse_expr("u[x] + k*u[y] + u", *fctx), fctx);
    DeterminingSystem full = determining_system(first, Ansatz::Full);
    DeterminingSystem red = ansatz_reduce(full, first);
    CHECK(red.eta_name == full.eta_name);  // eta survives; only xi_u is imposed
    for (const auto& d : red.equations) {
        bool has_xi_u = d.eq.contains_atom_if([&](const Atom& a) {
            const auto* ud = std::get_if<UnknownDerivAtom>(&a);
            if (!ud || ud->fn.rfind("xi", 0) != 0) return false;
            return std::find(ud->args.begin(), ud->args.end(), "u") != ud->args.end();
        });
        CHECK(!has_xi_u);
    }
}
