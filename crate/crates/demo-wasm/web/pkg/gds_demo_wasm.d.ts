/* tslint:disable */
/* eslint-disable */

/**
 * Coefficient paths of the k-support Dantzig selector on a small synthetic problem.
 */
export class LambdaPath {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Row-major, one row of `p` coefficients per lambda.
     */
    coefs: Float64Array;
    l2_errors: Float64Array;
    /**
     * Descending.
     */
    lambdas: Float64Array;
    p: number;
    truth: Float64Array;
}

/**
 * Projection of a vector onto the dual-norm ball `{w : top-k L2 norm <= lambda}`.
 */
export class Projection {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    beta: number;
    /**
     * Top-k L2 norm of the input.
     */
    input_norm: number;
    r: number;
    /**
     * Zero when the input is already inside the ball.
     */
    s: number;
    w: Float64Array;
}

/**
 * Monte Carlo `E[top-k norm of g]` against its closed-form bound, for k = 1..=p.
 */
export class WidthCurve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    bounds: Float64Array;
    estimates: Float64Array;
    ks: Float64Array;
    std_errors: Float64Array;
}

export function lambdaPath(n: number, k: number, points: number, seed: number): LambdaPath;

export function project(x: Float64Array, k: number, lambda: number): Projection;

export function widthCurve(p: number, trials: number, seed: number): WidthCurve;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_get_lambdapath_coefs: (a: number) => [number, number];
    readonly __wbg_get_lambdapath_l2_errors: (a: number) => [number, number];
    readonly __wbg_get_lambdapath_lambdas: (a: number) => [number, number];
    readonly __wbg_get_lambdapath_p: (a: number) => number;
    readonly __wbg_get_lambdapath_truth: (a: number) => [number, number];
    readonly __wbg_get_projection_beta: (a: number) => number;
    readonly __wbg_get_projection_input_norm: (a: number) => number;
    readonly __wbg_get_projection_r: (a: number) => number;
    readonly __wbg_get_projection_s: (a: number) => number;
    readonly __wbg_get_projection_w: (a: number) => [number, number];
    readonly __wbg_get_widthcurve_bounds: (a: number) => [number, number];
    readonly __wbg_get_widthcurve_estimates: (a: number) => [number, number];
    readonly __wbg_get_widthcurve_ks: (a: number) => [number, number];
    readonly __wbg_get_widthcurve_std_errors: (a: number) => [number, number];
    readonly __wbg_lambdapath_free: (a: number, b: number) => void;
    readonly __wbg_projection_free: (a: number, b: number) => void;
    readonly __wbg_set_lambdapath_coefs: (a: number, b: number, c: number) => void;
    readonly __wbg_set_lambdapath_l2_errors: (a: number, b: number, c: number) => void;
    readonly __wbg_set_lambdapath_lambdas: (a: number, b: number, c: number) => void;
    readonly __wbg_set_lambdapath_p: (a: number, b: number) => void;
    readonly __wbg_set_lambdapath_truth: (a: number, b: number, c: number) => void;
    readonly __wbg_set_projection_beta: (a: number, b: number) => void;
    readonly __wbg_set_projection_input_norm: (a: number, b: number) => void;
    readonly __wbg_set_projection_r: (a: number, b: number) => void;
    readonly __wbg_set_projection_s: (a: number, b: number) => void;
    readonly __wbg_set_projection_w: (a: number, b: number, c: number) => void;
    readonly __wbg_set_widthcurve_bounds: (a: number, b: number, c: number) => void;
    readonly __wbg_set_widthcurve_estimates: (a: number, b: number, c: number) => void;
    readonly __wbg_set_widthcurve_ks: (a: number, b: number, c: number) => void;
    readonly __wbg_set_widthcurve_std_errors: (a: number, b: number, c: number) => void;
    readonly __wbg_widthcurve_free: (a: number, b: number) => void;
    readonly lambdaPath: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly project: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly widthCurve: (a: number, b: number, c: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
