/* tslint:disable */
/* eslint-disable */

/**
 * Normal form of an expression such as `p dp` or `v[1] f[1]`.
 */
export function normal_form(expr: string, n: number, t: string): string;

/**
 * Nonzero entries of a named operator.
 */
export function operator(name: string, n: number, t: string): string;

/**
 * Names accepted by [`operator`].
 */
export function operator_names(): string[];

/**
 * Report lines of one suite, run on the calling thread with the rewriting engine.
 */
export function run_suite(suite: string, n: number, t: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly normal_form: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly operator: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly operator_names: () => [number, number];
    readonly run_suite: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_drop_slice: (a: number, b: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
