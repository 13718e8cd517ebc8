#pragma once

#include <functional>
#include <memory>

#include "singspline/jet.hpp"

namespace singspline {

// A scalar function with derivatives up to order two. value() is the hot
// path for quadrature of L^2 quantities; jet() serves the Sobolev norms.
class ScalarField {
public:
    virtual ~ScalarField() = default;
    virtual Jet2 jet(double u, double v) const = 0;
    virtual double value(double u, double v) const { return jet(u, v).v; }
};

class ConstantField : public ScalarField {
public:
    explicit ConstantField(double c) : c_(c) {}
    Jet2 jet(double, double) const override { return Jet2::constant(c_); }
    double value(double, double) const override { return c_; }

private:
    double c_;
};

// Wraps analytic jets given as a callable.
class CallableField : public ScalarField {
public:
    explicit CallableField(std::function<Jet2(double, double)> f) : f_(std::move(f)) {}
    Jet2 jet(double u, double v) const override { return f_(u, v); }

private:
    std::function<Jet2(double, double)> f_;
};

class DifferenceField : public ScalarField {
public:
    DifferenceField(const ScalarField& a, const ScalarField& b) : a_(a), b_(b) {}
    Jet2 jet(double u, double v) const override { return a_.jet(u, v) - b_.jet(u, v); }
    double value(double u, double v) const override { return a_.value(u, v) - b_.value(u, v); }

private:
    const ScalarField& a_;
    const ScalarField& b_;
};

class ProductField : public ScalarField {
public:
    ProductField(const ScalarField& a, const ScalarField& b) : a_(a), b_(b) {}
    Jet2 jet(double u, double v) const override { return a_.jet(u, v) * b_.jet(u, v); }
    double value(double u, double v) const override { return a_.value(u, v) * b_.value(u, v); }

private:
    const ScalarField& a_;
    const ScalarField& b_;
};

// phi(c*u, c*v)
class ScaledArgField : public ScalarField {
public:
    ScaledArgField(const ScalarField& phi, double c) : phi_(phi), c_(c) {}
    Jet2 jet(double u, double v) const override {
        Jet2 j = phi_.jet(c_ * u, c_ * v);
        j.du *= c_; j.dv *= c_;
        j.duu *= c_ * c_; j.duv *= c_ * c_; j.dvv *= c_ * c_;
        return j;
    }
    double value(double u, double v) const override { return phi_.value(c_ * u, c_ * v); }

private:
    const ScalarField& phi_;
    double c_;
};

}  // namespace singspline
