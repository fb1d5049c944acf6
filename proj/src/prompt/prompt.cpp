#include "testgen/prompt/prompt.hpp"

#include <algorithm>

#include "testgen/error.hpp"
#include "testgen/util/text.hpp"

namespace testgen::prompt {

using model::Language;

namespace {

constexpr Slot kRenderOrder[] = {Slot::fewshot,        Slot::constructors_a, Slot::auxiliary_b,
                                 Slot::guidance_c,     Slot::focal_d,        Slot::call_chains_e,
                                 Slot::mock_decls_f,   Slot::mock_ctor_static_g,
                                 Slot::mock_api_h,     Slot::feedback};

// Dropped front-to-back under budget pressure; slot d is never dropped and
// repair feedback is exempted separately.
constexpr Slot kDropOrder[] = {Slot::call_chains_e, Slot::auxiliary_b,        Slot::constructors_a,
                               Slot::fewshot,       Slot::mock_api_h,         Slot::mock_ctor_static_g,
                               Slot::mock_decls_f,  Slot::guidance_c,         Slot::feedback};

const TemplateSet& templates_of(const PromptConfig& cfg) {
    return cfg.templates ? *cfg.templates : TemplateSet::builtin();
}

std::string fence(Language lang, const std::string& code) {
    std::string tag = lang == Language::java ? "java" : "python";
    std::string body = code;
    if (!body.empty() && body.back() != '\n') body += "\n";
    return "```" + tag + "\n" + body + "```";
}

std::string render_focal_java(const analysis::FocalTarget& target) {
    const model::TypeDecl* cls = target.focal_class;
    const model::Callable* m = target.focal_method;
    std::string out;
    if (cls && cls->unit && !cls->unit->package_name.empty())
        out += "Package: " + cls->unit->package_name + "\n";
    out += "Focal class: " + (cls ? cls->qualified_name : "?") + "\n";
    out += "Focal method: " + (m ? m->signature() : "?") + "\n";
    if (target.inherited_from_abstract && m && m->owner)
        out += "(implementation inherited from abstract class " + m->owner->qualified_name +
               ")\n";

    std::string code;
    if (cls) {
        std::string head;
        if (cls->visibility == model::Visibility::public_vis) head += "public ";
        if (cls->kind == model::TypeKind::abstract_class) head += "abstract ";
        head += cls->kind == model::TypeKind::interface_type ? "interface "
                : cls->kind == model::TypeKind::enum_type    ? "enum "
                                                             : "class ";
        head += cls->simple_name();
        if (cls->superclass) head += " extends " + cls->superclass->name;
        if (!cls->interfaces.empty()) {
            head += " implements ";
            for (size_t i = 0; i < cls->interfaces.size(); ++i) {
                if (i) head += ", ";
                head += cls->interfaces[i].name;
            }
        }
        code += head + " {\n";
        for (const auto& f : cls->fields) {
            code += "    " + std::string(model::to_string(f->visibility)) + " " +
                    f->declared_type.name + " " + f->name + ";\n";
        }
        if (m && m->unit && !m->decl_span.empty()) {
            std::string src = m->unit->source_text.substr(m->decl_span.begin,
                                                          m->decl_span.length());
            code += "\n";
            for (const auto& line : util::split_lines(src)) code += "    " + line + "\n";
        }
        code += "}";
    }
    out += fence(Language::java, code);
    return out;
}

std::string render_focal_python(const analysis::ModuleTarget& target) {
    std::string out = "Module: " + target.id() + "\n";
    out += fence(Language::python, target.module ? target.module->source_text : "");
    return out;
}

std::string render_constructors_java(const std::vector<const model::Callable*>& ctors) {
    std::vector<std::string> lines;
    for (const auto* c : ctors) lines.push_back(c->signature());
    return util::join(lines, "\n");
}

std::string render_constructors_python(const std::vector<analysis::ImportedConstructor>& ctors) {
    std::vector<std::string> lines;
    for (const auto& c : ctors) lines.push_back(c.signature());
    return util::join(lines, "\n");
}

std::string render_accessors(const analysis::AccessorSet& acc) {
    std::string out;
    auto line = [](const model::Callable* c) {
        std::string owner = c->owner ? c->owner->simple_name() + "." : "";
        return "  " + owner + c->signature();
    };
    if (!acc.setters.empty()) {
        out += "Setters:\n";
        for (const auto* s : acc.setters) out += line(s) + "\n";
    }
    if (!acc.getters.empty()) {
        out += "Getters:\n";
        for (const auto* g : acc.getters) out += line(g) + "\n";
    }
    while (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

std::string render_chains(const std::vector<analysis::CallChain>& chains) {
    std::vector<std::string> lines;
    for (const auto& ch : chains) lines.push_back(ch.render());
    return util::join(lines, "\n");
}

std::string render_fewshot(const std::vector<analysis::FewShotExample>& examples) {
    std::string out;
    for (size_t i = 0; i < examples.size(); ++i) {
        if (i) out += "\n\n";
        out += "Focal code:\n" + fence(Language::python, examples[i].focal_snippet);
        out += "\nTest:\n" + fence(Language::python, examples[i].test_snippet);
    }
    return out;
}

std::string render_mock_decls(const analysis::MockPlan& plan,
                              const analysis::TestSkeleton& skeleton) {
    std::string out;
    for (const auto& d : skeleton.mock_declarations) out += d + "\n";
    (void)plan;
    out += "\nTest skeleton (complete the body at the marker):\n";
    out += fence(Language::java, skeleton.class_text);
    return out;
}

std::string render_stub_slots(const std::vector<analysis::TestSkeleton::StubSlot>& slots) {
    std::vector<std::string> lines;
    for (const auto& s : slots) lines.push_back(s.call_description + "\n    " + s.stub_text);
    return util::join(lines, "\n");
}

void apply_budget(PromptBundle& bundle, const PromptConfig& cfg) {
    if (cfg.token_budget <= 0) return;
    auto over = [&]() { return estimate_tokens(render(bundle, cfg)) > cfg.token_budget; };
    if (!over()) return;
    for (Slot s : kDropOrder) {
        if (s == Slot::feedback && bundle.kind == PromptKind::repair) continue;
        if (!bundle.has(s)) continue;
        bundle.remove(s);
        if (!over()) return;
    }
    const std::string* focal = bundle.get(Slot::focal_d);
    if (focal && estimate_tokens(*focal) > cfg.token_budget)
        throw BudgetExceededError("focal slot alone exceeds the token budget of " +
                                  std::to_string(cfg.token_budget));
    // Remaining overflow is mandatory content; the budget is a guardrail.
}

}  // namespace

const char* slot_name(Slot s) {
    switch (s) {
        case Slot::fewshot: return "fewshot";
        case Slot::constructors_a: return "a";
        case Slot::auxiliary_b: return "b";
        case Slot::guidance_c: return "c";
        case Slot::focal_d: return "d";
        case Slot::call_chains_e: return "e";
        case Slot::mock_decls_f: return "f";
        case Slot::mock_ctor_static_g: return "g";
        case Slot::mock_api_h: return "h";
        case Slot::feedback: return "feedback";
    }
    return "?";
}

bool PromptBundle::has(Slot s) const { return get(s) != nullptr; }

const std::string* PromptBundle::get(Slot s) const {
    for (const auto& [slot, text] : sections)
        if (slot == s) return &text;
    return nullptr;
}

void PromptBundle::set(Slot s, std::string text) {
    for (auto& [slot, existing] : sections) {
        if (slot == s) {
            existing = std::move(text);
            return;
        }
    }
    sections.emplace_back(s, std::move(text));
}

void PromptBundle::remove(Slot s) {
    sections.erase(std::remove_if(sections.begin(), sections.end(),
                                  [&](const auto& p) { return p.first == s; }),
                   sections.end());
}

int estimate_tokens(std::string_view text) {
    return static_cast<int>((text.size() + 3) / 4);
}

PromptBundle build_generation_prompt(const FocalContext& ctx, const PromptConfig& cfg) {
    const TemplateSet& tpl = templates_of(cfg);
    PromptBundle bundle;
    bundle.kind = PromptKind::generation;
    bundle.language = ctx.language();
    bundle.target_id = ctx.target_id();

    if (bundle.language == Language::python) {
        if (!ctx.module) throw ConfigError("python generation context has no module target");
        bundle.system_preamble = tpl.get("preamble_generation_python.txt");
        if (!ctx.fewshot.empty()) bundle.set(Slot::fewshot, render_fewshot(ctx.fewshot));
        if (!ctx.imported_constructors.empty())
            bundle.set(Slot::constructors_a,
                       render_constructors_python(ctx.imported_constructors));
        bundle.set(Slot::guidance_c, tpl.get("guidance_python.txt"));
        bundle.set(Slot::focal_d, render_focal_python(*ctx.module));
        apply_budget(bundle, cfg);
        return bundle;
    }

    if (!ctx.focal) throw ConfigError("java generation context has no focal target");
    bundle.system_preamble = tpl.get("preamble_generation_java.txt");
    if (!ctx.constructors.empty())
        bundle.set(Slot::constructors_a, render_constructors_java(ctx.constructors));
    if (!ctx.accessors.setters.empty() || !ctx.accessors.getters.empty())
        bundle.set(Slot::auxiliary_b, render_accessors(ctx.accessors));
    bundle.set(Slot::guidance_c, tpl.get("guidance_java.txt"));
    bundle.set(Slot::focal_d, render_focal_java(*ctx.focal));
    if (!ctx.call_chains.empty()) bundle.set(Slot::call_chains_e, render_chains(ctx.call_chains));

    if (ctx.mock_plan && !ctx.mock_plan->empty()) {
        analysis::TestSkeleton skeleton =
            ctx.skeleton ? *ctx.skeleton : analysis::build_mock_skeleton(*ctx.mock_plan, *ctx.focal);
        if (!ctx.mock_plan->mockable_fields.empty() || !ctx.mock_plan->mockable_types.empty())
            bundle.set(Slot::mock_decls_f, render_mock_decls(*ctx.mock_plan, skeleton));
        if (!skeleton.constructor_static_stubs.empty())
            bundle.set(Slot::mock_ctor_static_g,
                       render_stub_slots(skeleton.constructor_static_stubs));
        if (!skeleton.api_stubs.empty())
            bundle.set(Slot::mock_api_h, render_stub_slots(skeleton.api_stubs));
    }
    apply_budget(bundle, cfg);
    return bundle;
}

PromptBundle build_repair_prompt(const PromptBundle& prior, const std::string& failing_test,
                                 const pipeline::Diagnostic& diagnostic,
                                 const PromptConfig& cfg) {
    const TemplateSet& tpl = templates_of(cfg);
    PromptBundle bundle;
    bundle.kind = PromptKind::repair;
    bundle.language = prior.language;
    bundle.target_id = prior.target_id;
    bundle.system_preamble = tpl.get("preamble_repair.txt");
    if (const std::string* focal = prior.get(Slot::focal_d)) bundle.set(Slot::focal_d, *focal);

    std::string fb;
    fb += std::string(pipeline::to_string(diagnostic.phase)) + " diagnostic: " +
          diagnostic.message + "\n";
    if (diagnostic.line) {
        auto lines = util::split_lines(failing_test);
        int n = *diagnostic.line;
        if (n >= 1 && n <= static_cast<int>(lines.size()))
            fb += "Erroneous line " + std::to_string(n) + ": " + lines[n - 1] + "\n";
        else
            fb += "Reported at line " + std::to_string(n) + "\n";
    }
    fb += "Failing test:\n" + fence(bundle.language, failing_test);
    bundle.set(Slot::feedback, fb);
    apply_budget(bundle, cfg);
    return bundle;
}

PromptBundle build_coverage_prompt(const FocalContext& ctx,
                                   const std::vector<std::pair<int, std::string>>& uncovered,
                                   const PromptConfig& cfg) {
    if (uncovered.empty())
        throw EmptyUncoveredError("coverage prompt requested with no uncovered lines");
    const TemplateSet& tpl = templates_of(cfg);
    PromptBundle bundle;
    bundle.kind = PromptKind::coverage;
    bundle.language = ctx.language();
    bundle.target_id = ctx.target_id();
    bundle.system_preamble = tpl.get("preamble_coverage.txt");
    if (bundle.language == Language::python) {
        if (ctx.module) bundle.set(Slot::focal_d, render_focal_python(*ctx.module));
    } else {
        if (ctx.focal) bundle.set(Slot::focal_d, render_focal_java(*ctx.focal));
    }

    const model::CodeUnit* unit = ctx.focal_unit();
    std::string file = unit ? unit->path : "";

    auto feedback_for = [&](size_t count) {
        std::string fb = "Uncovered lines" + (file.empty() ? "" : " in " + file) + ":\n";
        for (size_t i = 0; i < count; ++i)
            fb += "  " + std::to_string(uncovered[i].first) + ": " + uncovered[i].second + "\n";
        if (count < uncovered.size())
            fb += "(showing first " + std::to_string(count) + " of " +
                  std::to_string(uncovered.size()) + " uncovered lines)\n";
        while (!fb.empty() && fb.back() == '\n') fb.pop_back();
        return fb;
    };

    size_t count = uncovered.size();
    bundle.set(Slot::feedback, feedback_for(count));
    if (cfg.token_budget > 0) {
        while (count > 1 && estimate_tokens(render(bundle, cfg)) > cfg.token_budget) {
            --count;
            bundle.set(Slot::feedback, feedback_for(count));
        }
        apply_budget(bundle, cfg);
    }
    return bundle;
}

std::string render(const PromptBundle& bundle, const PromptConfig& cfg) {
    const TemplateSet& tpl = templates_of(cfg);
    std::vector<std::string> parts;
    if (!bundle.system_preamble.empty()) parts.push_back(bundle.system_preamble);
    for (Slot s : kRenderOrder) {
        const std::string* content = bundle.get(s);
        if (!content || content->empty()) continue;
        std::string section = tpl.get(std::string("section_") + slot_name(s) + ".txt");
        parts.push_back(util::replace_all(section, "{{content}}", *content));
    }
    std::string out = util::join(parts, "\n\n");
    out += "\n";
    return out;
}

}  // namespace testgen::prompt
