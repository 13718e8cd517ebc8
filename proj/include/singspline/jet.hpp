#pragma once

namespace singspline {

// Value and partial derivatives up to order two of a bivariate function.
// Field combinators (products, quotients, compositions) propagate the
// derivatives so that Sobolev seminorms up to H^2 can be assembled without
// finite differencing.
struct Jet2 {
    double v = 0;
    double du = 0, dv = 0;
    double duu = 0, duv = 0, dvv = 0;

    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        return {a.v + b.v, a.du + b.du, a.dv + b.dv,
                a.duu + b.duu, a.duv + b.duv, a.dvv + b.dvv};
    }
    friend Jet2 operator-(const Jet2& a, const Jet2& b) {
        return {a.v - b.v, a.du - b.du, a.dv - b.dv,
                a.duu - b.duu, a.duv - b.duv, a.dvv - b.dvv};
    }
    friend Jet2 operator*(double c, const Jet2& a) {
        return {c * a.v, c * a.du, c * a.dv, c * a.duu, c * a.duv, c * a.dvv};
    }
    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        Jet2 r;
        r.v = a.v * b.v;
        r.du = a.du * b.v + a.v * b.du;
        r.dv = a.dv * b.v + a.v * b.dv;
        r.duu = a.duu * b.v + 2 * a.du * b.du + a.v * b.duu;
        r.duv = a.duv * b.v + a.du * b.dv + a.dv * b.du + a.v * b.duv;
        r.dvv = a.dvv * b.v + 2 * a.dv * b.dv + a.v * b.dvv;
        return r;
    }
    friend Jet2 operator/(const Jet2& a, const Jet2& b) {
        Jet2 q;
        q.v = a.v / b.v;
        q.du = (a.du - q.v * b.du) / b.v;
        q.dv = (a.dv - q.v * b.dv) / b.v;
        q.duu = (a.duu - q.v * b.duu - 2 * q.du * b.du) / b.v;
        q.duv = (a.duv - q.v * b.duv - q.du * b.dv - q.dv * b.du) / b.v;
        q.dvv = (a.dvv - q.v * b.dvv - 2 * q.dv * b.dv) / b.v;
        return q;
    }

    Jet2& operator+=(const Jet2& b) { *this = *this + b; return *this; }

    static Jet2 constant(double c) { return {c, 0, 0, 0, 0, 0}; }
};

// Jet of phi(X(u,v), Y(u,v)) from the jet of phi in its own variables (x,y)
// and the jets of the component maps X, Y.
inline Jet2 compose(const Jet2& phi, const Jet2& X, const Jet2& Y) {
    Jet2 r;
    r.v = phi.v;
    r.du = phi.du * X.du + phi.dv * Y.du;
    r.dv = phi.du * X.dv + phi.dv * Y.dv;
    r.duu = phi.duu * X.du * X.du + 2 * phi.duv * X.du * Y.du + phi.dvv * Y.du * Y.du
            + phi.du * X.duu + phi.dv * Y.duu;
    r.duv = phi.duu * X.du * X.dv + phi.duv * (X.du * Y.dv + X.dv * Y.du)
            + phi.dvv * Y.du * Y.dv + phi.du * X.duv + phi.dv * Y.duv;
    r.dvv = phi.duu * X.dv * X.dv + 2 * phi.duv * X.dv * Y.dv + phi.dvv * Y.dv * Y.dv
            + phi.du * X.dvv + phi.dv * Y.dvv;
    return r;
}

}  // namespace singspline
