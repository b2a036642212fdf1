// A scripted fetch: route patterns to canned JSON payloads and record every
// request so contract tests can assert exactly what the UI sent.

export interface RecordedCall {
  method: string;
  path: string;
  body: unknown;
}

export type Route = {
  method: string;
  path: RegExp;
  reply: (call: RecordedCall) => { status?: number; body: unknown };
};

export function mockFetch(routes: Route[]) {
  const calls: RecordedCall[] = [];
  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    const call: RecordedCall = {
      method,
      path: url,
      body: init?.body ? JSON.parse(String(init.body)) : undefined,
    };
    calls.push(call);
    for (const route of routes) {
      if (route.method === method && route.path.test(url)) {
        const { status = 200, body } = route.reply(call);
        return new Response(JSON.stringify(body), {
          status,
          headers: { "Content-Type": "application/json" },
        });
      }
    }
    return new Response(JSON.stringify({ detail: `no route for ${method} ${url}` }), {
      status: 404,
    });
  };
  return { calls, fetchFn };
}

export const LOG_SUMMARY = {
  log_id: "log-1",
  alphabet: ["a", "b", "c"],
  traces: 5,
  events: 13,
};

export function ruleRow(overrides: Partial<Record<string, unknown>> = {}) {
  return {
    template: "Response",
    activities: ["a", "b"],
    activated: 4,
    satisfied: 2,
    support: "0.4000",
    confidence: "0.5000",
    selected: false,
    ...overrides,
  };
}
