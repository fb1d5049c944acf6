#pragma once

#include <optional>
#include <string>
#include <vector>

#include "testgen/analysis/allowlist.hpp"
#include "testgen/model/model.hpp"

namespace testgen::analysis {

struct AnalysisConfig {
    ApiAllowlist mockable_apis;
    ApiAllowlist service_entry_types;
    // Transitive constructor collection depth; 0 means unbounded.
    int max_constructor_depth = 3;
};

// One method selected for test generation.
struct FocalTarget {
    const model::Callable* focal_method = nullptr;
    const model::TypeDecl* focal_class = nullptr;
    bool inherited_from_abstract = false;

    std::string id() const;
};

// Chain of calls from a non-private entry method down to a private method;
// path starts at the entry and ends at the private callee.
struct CallChain {
    const model::Callable* entry = nullptr;
    std::vector<const model::Callable*> path;

    std::string render() const;
};

struct AccessorSet {
    std::vector<const model::Callable*> setters;
    std::vector<const model::Callable*> getters;
};

struct MockPlan {
    std::vector<const model::FieldDecl*> mockable_fields;   // F_m
    std::vector<model::TypeRef> mockable_types;             // T_m
    std::vector<const model::CallSite*> constructor_calls;  // M_c
    std::vector<const model::CallSite*> static_calls;       // M_s
    std::vector<const model::CallSite*> api_calls;          // M_a
    ApiAllowlist api_allowlist;

    bool empty() const {
        return mockable_fields.empty() && mockable_types.empty() && constructor_calls.empty() &&
               static_calls.empty() && api_calls.empty();
    }
};

// Rendered partial test class with mock declarations and fixtures; the model
// fills the body at the completion marker.
struct TestSkeleton {
    std::vector<std::string> mock_declarations;
    std::string setup_fixture;
    struct StubSlot {
        std::string call_description;
        std::string stub_text;
    };
    std::vector<StubSlot> constructor_static_stubs;  // from M_c and M_s
    std::vector<StubSlot> api_stubs;                 // from M_a
    std::string completion_marker;
    std::string class_text;  // full renderable test class containing the marker
};

// Scope rules: declared public/protected/package methods; plus concrete method
// implementations inherited from abstract ancestors (up to the first concrete
// ancestor); abstract focal classes contribute only their static methods.
std::vector<FocalTarget> compute_testing_scope(const model::TypeDecl& focal_class,
                                               const model::CodeModel& model);

// Constructors of the focal class (for virtual focal methods) and of every
// application-typed formal parameter, transitively through constructor
// parameters up to cfg.max_constructor_depth.
std::vector<const model::Callable*> collect_relevant_constructors(const FocalTarget& target,
                                                                  const model::CodeModel& model,
                                                                  const AnalysisConfig& cfg);

AccessorSet collect_auxiliary_methods(const FocalTarget& target, const model::CodeModel& model);

std::vector<CallChain> find_private_call_chains(const model::TypeDecl& focal_class);

// Worklist over {focal class} ∪ focal-method parameter types, expanding each
// popped type through its constructors' parameter types unconditionally.
struct MockedFieldsAndTypes {
    std::vector<model::TypeRef> mockable_types;            // T_m
    std::vector<const model::FieldDecl*> mockable_fields;  // F_m
};
MockedFieldsAndTypes identify_mocked_fields_and_types(const model::Callable& focal_method,
                                                      const model::TypeDecl& focal_class,
                                                      const ApiAllowlist& mockable_apis,
                                                      const model::CodeModel& model);

// Classifies call sites within the mocking scope (focal method, focal-class
// constructors, methods reachable from the focal method, service-entry
// overrides) into constructor, static, and API calls.
struct MockingScope {
    std::vector<const model::CallSite*> constructor_calls;  // M_c
    std::vector<const model::CallSite*> static_calls;       // M_s
    std::vector<const model::CallSite*> api_calls;          // M_a
    std::vector<const model::Callable*> scope;              // S, for diagnostics
};
MockingScope identify_mocking_scope(const model::Callable& focal_method,
                                    const model::TypeDecl& focal_class,
                                    const AnalysisConfig& cfg, const model::CodeModel& model);

MockPlan build_mock_plan(const FocalTarget& target, const AnalysisConfig& cfg,
                         const model::CodeModel& model);

// Throws EmptyPlanError when the plan has no component to render.
TestSkeleton build_mock_skeleton(const MockPlan& plan, const FocalTarget& target);

bool is_service_entry_class(const model::TypeDecl& cls, const AnalysisConfig& cfg,
                            const model::CodeModel& model);
bool is_overridden(const model::Callable& method, const AnalysisConfig& cfg,
                   const model::CodeModel& model);

}  // namespace testgen::analysis
