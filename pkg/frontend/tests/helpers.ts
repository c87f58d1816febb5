/** Test helpers: load the committed fixture bundle (a real exporter run)
 * through the production loader with a filesystem-backed fetch. */

import { readFile } from "node:fs/promises";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { Bundle, FetchJson, loadBundle } from "../src/loader.js";

export const FIXTURE_DIR = join(
  dirname(fileURLToPath(import.meta.url)), "fixture_bundle");

export function fsFetch(opts: { fail?: RegExp } = {}): FetchJson {
  return async (url: string) => {
    if (opts.fail && opts.fail.test(url)) {
      throw new Error(`simulated failure for ${url}`);
    }
    const text = await readFile(url, "utf-8");
    return JSON.parse(text);
  };
}

export function fixtureBundle(opts: { fail?: RegExp } = {}): Promise<Bundle> {
  return loadBundle(join(FIXTURE_DIR, "manifest.json"), fsFetch(opts));
}

export async function fixtureJson(relPath: string): Promise<unknown> {
  return JSON.parse(await readFile(join(FIXTURE_DIR, relPath), "utf-8"));
}
