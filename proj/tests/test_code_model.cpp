#include <gtest/gtest.h>

#include "support/model_builder.hpp"
#include "testgen/model/model.hpp"

using namespace testgen;
using namespace testgen::model;
using testgen::testsupport::build_java;
using testgen::testsupport::build_model;

TEST(CodeModel, ResolveApplicationLibraryUnresolved) {
    auto m = build_model({{"com/app/Options.java", R"(package com.app;
public class Options { public void use(String s, Missing x) {} }
)"}},
                         Language::java);
    TypeDecl* opts = m.find_type("com.app.Options");
    ASSERT_NE(opts, nullptr);

    TypeRef app{"Options", "", TypeClass::unresolved};
    m.resolve_in_place(app, opts->unit);
    EXPECT_EQ(app.classification, TypeClass::application);
    EXPECT_EQ(app.resolved_name, "com.app.Options");
    EXPECT_EQ(m.resolve_type(app).decl, opts);

    const Callable& use = *opts->callables[0];
    EXPECT_EQ(use.params[0].type.classification, TypeClass::library);
    EXPECT_EQ(use.params[0].type.resolved_name, "java.lang.String");
    EXPECT_EQ(use.params[1].type.classification, TypeClass::unresolved);
}

TEST(CodeModel, ImportResolutionCrossUnit) {
    auto m = build_model({{"com/app/Registry.java", R"(package com.app;
public class Registry { public Registry() {} }
)"},
                          {"com/use/Client.java", R"(package com.use;
import com.app.Registry;
import java.net.Socket;
public class Client { void go(Registry r, Socket s) {} }
)"}},
                         Language::java);
    TypeDecl* client = m.find_type("Client");
    ASSERT_NE(client, nullptr);
    const auto& params = client->callables[0]->params;
    EXPECT_EQ(params[0].type.classification, TypeClass::application);
    EXPECT_EQ(params[0].type.resolved_name, "com.app.Registry");
    EXPECT_EQ(params[1].type.classification, TypeClass::library);
    EXPECT_EQ(params[1].type.resolved_name, "java.net.Socket");
}

TEST(CodeModel, ClassCallGraphSimpleEdge) {
    auto m = build_java(R"(class A {
    public void p() { q(); }
    private void q() {}
})");
    const TypeDecl& a = *m.find_type("A");
    auto g = build_class_call_graph(a);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_TRUE(g.has_edge(a.callables[0].get(), a.callables[1].get()));
}

TEST(CodeModel, ClassCallGraphEmptyWithoutIntraClassCalls) {
    auto m = build_java(R"(class A {
    public void p() { System.out.println("x"); }
    public void r() {}
})");
    auto g = build_class_call_graph(*m.find_type("A"));
    EXPECT_EQ(g.edge_count(), 0u);
}

TEST(CodeModel, ClassCallGraphChain) {
    auto m = build_java(R"(class A {
    public void p() { q(); }
    private void q() { r(); }
    private void r() {}
})");
    const TypeDecl& a = *m.find_type("A");
    auto g = build_class_call_graph(a);
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_TRUE(g.has_edge(a.callables[0].get(), a.callables[1].get()));
    EXPECT_TRUE(g.has_edge(a.callables[1].get(), a.callables[2].get()));
    auto reach = g.reachable_from(a.callables[0].get());
    EXPECT_EQ(reach.size(), 2u);
}

TEST(CodeModel, CallGraphEdgesStayInsideClass) {
    std::mt19937 rng(99);
    for (int i = 0; i < 20; ++i) {
        auto rm = testsupport::random_java_model(rng);
        for (const TypeDecl* t : rm.model.all_types()) {
            auto g = build_class_call_graph(*t);
            std::set<const Callable*> own;
            for (const auto& c : t->callables) own.insert(c.get());
            for (const auto& c : t->callables) {
                for (const Callable* succ : g.successors(c.get())) {
                    EXPECT_TRUE(own.count(succ));
                }
            }
        }
    }
}

TEST(CodeModel, OverloadResolutionByArityThenOrder) {
    auto m = build_java(R"(class O {
    public void go() { run(1); run(1, 2); run("a", "b", "c"); }
    void run(int a) {}
    void run(int a, int b) {}
})");
    const TypeDecl& o = *m.find_type("O");
    auto g = build_class_call_graph(o);
    const Callable* go = o.callables[0].get();
    auto succ = g.successors(go);
    // run(1) -> arity 1; run(1,2) -> arity 2; run(a,b,c) -> no arity match,
    // falls back to first declared overload (already present).
    ASSERT_EQ(succ.size(), 2u);
    EXPECT_EQ(succ[0]->params.size(), 1u);
    EXPECT_EQ(succ[1]->params.size(), 2u);
}

TEST(CodeModel, StaticReceiverResolution) {
    auto m = build_java(R"(class S {
    void go(Helper h) {
        h.run();
        Helper.stat();
        Unknown.stat();
    }
}
class Helper {
    void run() {}
    static void stat() {}
})");
    const Callable& go = *m.find_type("S")->callables[0];
    ASSERT_EQ(go.call_sites.size(), 3u);
    EXPECT_FALSE(go.call_sites[0].is_static_call);
    ASSERT_TRUE(go.call_sites[0].receiver_type.has_value());
    EXPECT_EQ(go.call_sites[0].receiver_type->resolved_name, "Helper");
    EXPECT_TRUE(go.call_sites[1].is_static_call);
    EXPECT_TRUE(go.call_sites[2].is_static_call);  // uppercase heuristic
    EXPECT_EQ(go.call_sites[2].receiver_type->classification, TypeClass::unresolved);
}

TEST(CodeModel, PythonConstructorCallResolution) {
    auto m = build_model({{"shapes.py", R"(class Circle:
    def __init__(self, r):
        self.r = r
    def area(self):
        return 3 * self.r * self.r
)"},
                          {"use.py", R"(import shapes

def make():
    c = shapes.Circle(2)
    return c.area()
)"}},
                         Language::python);
    const Callable& make = *m.find_module("use")->functions[0];
    ASSERT_GE(make.call_sites.size(), 2u);
    EXPECT_TRUE(make.call_sites[0].is_constructor_call);
    EXPECT_EQ(make.call_sites[0].receiver_type->resolved_name, "shapes.Circle");
}

TEST(CodeModel, IndexIsTotalOverDeclarations) {
    std::mt19937 rng(5);
    auto rm = testsupport::random_java_model(rng);
    for (const TypeDecl* t : rm.model.all_types()) {
        EXPECT_EQ(rm.model.find_type(t->qualified_name), t);
    }
}
