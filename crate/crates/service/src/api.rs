//! Route table. `docs/api.md` is rendered from it and a test keeps the two in sync.

pub struct Route {
    pub method: &'static str,
    pub path: &'static str,
    pub summary: &'static str,
    pub query: &'static [(&'static str, &'static str)],
    pub request: &'static str,
    pub response: &'static str,
    pub errors: &'static [(u16, &'static str)],
}

const METRIC_QUERY: &[(&str, &str)] = &[
    ("nt", "transposition window, at least 2 (default: the server's configured value)"),
    ("bed_mode", "`pooled` (default) or `per-fragment`"),
];

pub const ROUTES: &[Route] = &[
    Route {
        method: "GET",
        path: "/fragments",
        summary: "Stored fragments with their annotators and version tokens.",
        query: &[],
        request: "none",
        response: "`[{fragment_id, topic, atoms, annotators, has_gold, version}]`, ordered by id",
        errors: &[],
    },
    Route {
        method: "GET",
        path: "/fragments/{id}/layers/{annotator}",
        summary: "One annotator's layer. The `ETag` header carries the version token.",
        query: &[],
        request: "none",
        response: "`{fragment_id, annotator_id, version, raw_text, reference, layer, findings}`; `layer` is null if the annotator has none yet",
        errors: &[(404, "unknown fragment")],
    },
    Route {
        method: "PUT",
        path: "/fragments/{id}/layers/{annotator}",
        summary: "Creates or replaces a layer. Requires the version token read last, as `If-Match` or a `version` field.",
        query: &[],
        request: "`{version?, clause_boundaries: {masses}, spans, micro, macro}`; an `X-Annotator` header, if sent, must name the path annotator",
        response: "`{version, findings}`",
        errors: &[
            (400, "the layer breaks a structural rule; the body lists the findings"),
            (403, "`X-Annotator` names someone else"),
            (404, "unknown fragment"),
            (409, "stale version token; the body carries `current_version`"),
            (428, "no version token"),
        ],
    },
    Route {
        method: "POST",
        path: "/lint",
        summary: "Every lint over a fragment.",
        query: &[],
        request: "fragment JSON",
        response: "`{findings, errors}`",
        errors: &[(400, "malformed fragment")],
    },
    Route {
        method: "POST",
        path: "/wizard/next",
        summary: "Next micro-label chart question for the answers so far, or the decision.",
        query: &[],
        request: "`{in_hypothetical_only?, reports_event_or_discovery?, holds_entire_period?}`",
        response: "`{kind: \"question\", node, field, question_en, question_ja, examples, number}` or `{kind: \"decided\", label, path}`",
        errors: &[(400, "malformed answers")],
    },
    Route {
        method: "POST",
        path: "/wizard/decide",
        summary: "Micro label for a complete answer vector.",
        query: &[],
        request: "`{in_hypothetical_only, reports_event_or_discovery, holds_entire_period}`",
        response: "`{label}`; null means no micro label",
        errors: &[(400, "malformed answers")],
    },
    Route {
        method: "POST",
        path: "/metrics/segmentation",
        summary: "Boundary similarity, kappa and BED over the layers of one or more bundles.",
        query: METRIC_QUERY,
        request: "bundle JSON, or an array of bundles",
        response: "segmentation agreement report",
        errors: &[(400, "malformed bundle, fewer than two layers, or a bad parameter")],
    },
    Route {
        method: "POST",
        path: "/metrics/labels",
        summary: "Krippendorff's alpha, exact match and confusion counts for one label field.",
        query: &[
            ("field", "`micro` (default) or `macro`"),
            ("mode", "exact-match mode, `any-chose` (default) or `majority`"),
        ],
        request: "bundle JSON, or an array of bundles",
        response: "label agreement report; `alpha` is null with `alpha_undefined` set when it has no value",
        errors: &[(400, "malformed bundle or no reference segmentation")],
    },
    Route {
        method: "POST",
        path: "/adjudicate",
        summary: "Majority vote over every clause for micro, macro and span membership.",
        query: &[],
        request: "bundle JSON",
        response: "`{fragment_id, segmentation, outcomes}`; tied outcomes have `needs_discussion: true`",
        errors: &[(400, "malformed bundle or misaligned layers")],
    },
    Route {
        method: "POST",
        path: "/adjudicate/resolve",
        summary: "Settles one queued outcome after discussion.",
        query: &[],
        request: "`{adjudication, field, clause, resolution, resolvers, note?, at?}`",
        response: "the updated adjudication",
        errors: &[(400, "unknown outcome, outcome already decided, invalid label, or no resolver")],
    },
    Route {
        method: "GET",
        path: "/stats",
        summary: "Macro counts, micro shares and span lengths over the stored gold fragments.",
        query: &[],
        request: "none",
        response: "gold corpus statistics",
        errors: &[],
    },
];

/// Markdown reference for every route.
pub fn api_markdown() -> String {
    let mut out = String::from(
        "# HTTP API\n\n\
         Bodies are JSON. Errors are `{\"error\": message}`, plus `findings` on 400 and\n\
         `current_version` on 409. Unknown routes return 404.\n\n\
         Generated from the route table in `crates/service/src/api.rs`; run\n\
         `labov serve --print-api` to regenerate.\n",
    );
    for r in ROUTES {
        out.push_str(&format!("\n## {} {}\n\n{}\n\n", r.method, r.path, r.summary));
        if !r.query.is_empty() {
            out.push_str("Query parameters:\n\n");
            for (name, doc) in r.query {
                out.push_str(&format!("- `{name}`: {doc}\n"));
            }
            out.push('\n');
        }
        out.push_str(&format!("- Request: {}\n- Response: {}\n", r.request, r.response));
        for (status, doc) in r.errors {
            out.push_str(&format!("- {status}: {doc}\n"));
        }
    }
    out
}
