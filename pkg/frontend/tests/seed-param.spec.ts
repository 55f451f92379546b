import { describe, expect, it } from "vitest";

import { parseSeedParam } from "../src/seed-param.js";

describe("seed url parameter", () => {
  it("reads a decimal seed", () => {
    expect(parseSeedParam("https://play.example/run?seed=17")).toBe(17n);
    expect(parseSeedParam("/run?seed=17&locale=es")).toBe(17n);
  });

  it("accepts the full unsigned 64-bit range", () => {
    expect(parseSeedParam("?seed=18446744073709551615")).toBe(18446744073709551615n);
    expect(parseSeedParam("?seed=0")).toBe(0n);
  });

  it("rejects values outside the range or not decimal", () => {
    expect(parseSeedParam("?seed=18446744073709551616")).toBeNull();
    expect(parseSeedParam("?seed=-1")).toBeNull();
    expect(parseSeedParam("?seed=0x11")).toBeNull();
    expect(parseSeedParam("?seed=1.5")).toBeNull();
    expect(parseSeedParam("?seed=")).toBeNull();
  });

  it("returns null when the parameter is absent", () => {
    expect(parseSeedParam("https://play.example/run")).toBeNull();
    expect(parseSeedParam("?other=1")).toBeNull();
  });
});
