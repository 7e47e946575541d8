/* tslint:disable */
/* eslint-disable */

/**
 * Incidence matrices S_j and polynomial entries of M_j for every j.
 */
export function incidence(n: number): string;

/**
 * Θ = Σ α_j M_j(λ) with its eigenvalues and positivity verdict.
 */
export function metric(n: number, lambda: number, alpha: Float64Array): string;

/**
 * Eigenvalue flows of H^(N)(λ) over `count` couplings in `[start, stop]`.
 */
export function spectrum_sweep(n: number, start: number, stop: number, count: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly incidence: (a: number) => [number, number, number, number];
    readonly metric: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly spectrum_sweep: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
