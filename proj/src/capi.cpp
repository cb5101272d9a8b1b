#include "principal_actions/principal_actions.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "expr.hpp"
#include "json_io.hpp"
#include "reports.hpp"

struct pa_context {
  std::string last_error;
};

struct pa_element {
  pa::ExactElement value;
};

namespace {

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class F>
pa_status guarded(pa_context* ctx, F&& body) {
  if (!ctx) return PA_ERR_INVALID_ARGUMENT;
  ctx->last_error.clear();
  try {
    body();
    return PA_OK;
  } catch (const pa::Error& e) {
    ctx->last_error = e.what();
    return static_cast<pa_status>(e.code());
  } catch (const nlohmann::json::exception& e) {
    ctx->last_error = std::string("malformed JSON: ") + e.what();
    return PA_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    ctx->last_error = "out of memory";
    return PA_ERR_INTERNAL;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return PA_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw pa::InvalidArgument(std::string(what) + " must not be null");
}

pa_status binary_op(pa_context* ctx, const pa_element* a, const pa_element* b, pa_element** out, int op) {
  return guarded(ctx, [&] {
    require(a && b, "operand");
    require(out != nullptr, "out");
    pa::ExactElement r = op == 0 ? a->value + b->value : op == 1 ? a->value - b->value : a->value * b->value;
    *out = new pa_element{std::move(r)};
  });
}

}  // namespace

extern "C" {

const char* pa_version(void) { return "0.1.0"; }

pa_status pa_context_new(pa_context** out) {
  if (!out) return PA_ERR_INVALID_ARGUMENT;
  *out = new (std::nothrow) pa_context();
  return *out ? PA_OK : PA_ERR_INTERNAL;
}

void pa_context_free(pa_context* ctx) { delete ctx; }

const char* pa_last_error(const pa_context* ctx) { return ctx ? ctx->last_error.c_str() : "null context"; }

void pa_string_free(char* s) { std::free(s); }

int pa_command_count(void) { return static_cast<int>(pa::command_names().size()); }

const char* pa_command_name(int i) {
  const auto& names = pa::command_names();
  if (i < 0 || static_cast<std::size_t>(i) >= names.size()) return nullptr;
  return names[static_cast<std::size_t>(i)].c_str();
}

pa_status pa_run(pa_context* ctx, const char* command, const char* config_json, char** report_json) {
  return guarded(ctx, [&] {
    require(command != nullptr, "command");
    require(report_json != nullptr, "report_json");
    pa::Json config = config_json && *config_json ? pa::Json::parse(config_json) : pa::Json::object();
    *report_json = copy_string(pa::run_command(command, config).dump(2));
  });
}

pa_status pa_report_csv(pa_context* ctx, const char* command, const char* report_json, char** csv) {
  return guarded(ctx, [&] {
    require(command && report_json, "command and report");
    require(csv != nullptr, "csv");
    *csv = copy_string(pa::report_csv(command, pa::Json::parse(report_json)));
  });
}

pa_status pa_element_parse(pa_context* ctx, const char* group, const char* text, pa_element** out) {
  return guarded(ctx, [&] {
    require(group && text, "group and text");
    require(out != nullptr, "out");
    *out = new pa_element{pa::parse_polynomial(text, pa::group_from_name(group))};
  });
}

void pa_element_free(pa_element* e) { delete e; }

pa_status pa_element_add(pa_context* ctx, const pa_element* a, const pa_element* b, pa_element** out) {
  return binary_op(ctx, a, b, out, 0);
}
pa_status pa_element_sub(pa_context* ctx, const pa_element* a, const pa_element* b, pa_element** out) {
  return binary_op(ctx, a, b, out, 1);
}
pa_status pa_element_mul(pa_context* ctx, const pa_element* a, const pa_element* b, pa_element** out) {
  return binary_op(ctx, a, b, out, 2);
}

pa_status pa_element_adjoint(pa_context* ctx, const pa_element* a, pa_element** out) {
  return guarded(ctx, [&] {
    require(a && out, "operand and out");
    *out = new pa_element{pa::adjoint(a->value)};
  });
}

pa_status pa_element_equal(pa_context* ctx, const pa_element* a, const pa_element* b, int* equal) {
  return guarded(ctx, [&] {
    require(a && b && equal, "operands and result");
    *equal = a->value == b->value ? 1 : 0;
  });
}

pa_status pa_element_l1(pa_context* ctx, const pa_element* a, double* l1) {
  return guarded(ctx, [&] {
    require(a && l1, "operand and result");
    *l1 = a->value.l1();
  });
}

pa_status pa_element_to_json(pa_context* ctx, const pa_element* a, char** json) {
  return guarded(ctx, [&] {
    require(a && json, "operand and out");
    *json = copy_string(pa::to_json(a->value).dump());
  });
}

pa_status pa_element_to_string(pa_context* ctx, const pa_element* a, char** text) {
  return guarded(ctx, [&] {
    require(a && text, "operand and out");
    *text = copy_string(pa::format_expression(a->value));
  });
}

}  // extern "C"
