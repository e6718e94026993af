/* tslint:disable */
/* eslint-disable */

/**
 * For `p = 1..=p_max`: `[E, E^F, asymptotic]` per row, flattened.
 */
export function decrease_curves(variant_name: string, d: number, p_max: number): Float64Array;

/**
 * Monte Carlo estimate next to the exact value: `[mean, std_error, exact]`.
 */
export function mc_estimate(variant_name: string, p: number, d: number, n_sims: number, seed: bigint, full_basis: boolean): Float64Array;

/**
 * Per-work decrease on `c` cores over the sweep grid: `[p, value]` pairs.
 * ds points beyond the exact formula's depth are skipped.
 */
export function parallel_curve(variant_name: string, d: number, cores: number, p_multiples: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly decrease_curves: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly mc_estimate: (a: number, b: number, c: number, d: number, e: number, f: bigint, g: number) => [number, number, number, number];
    readonly parallel_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
